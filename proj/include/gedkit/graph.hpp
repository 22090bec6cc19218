#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ged {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0xFFFFFFFFu;

// Opaque label token. Two labels are equal iff their tokens are equal.
struct Label {
  std::string value;

  Label() = default;
  explicit Label(std::string v) : value(std::move(v)) {}
  Label(const char* v) : value(v) {}  // NOLINT: literal convenience

  auto operator<=>(const Label&) const = default;
  bool operator==(const Label&) const = default;
};

// Label assigned to edges whose source format carries none.
inline const Label kDefaultEdgeLabel{"\xE2\x80\x94"};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Label label = kDefaultEdgeLabel;

  bool operator==(const Edge&) const = default;
};

/*
 * Simple undirected graph with vertex and edge labels.
 *
 * Immutable once constructed: the constructor normalizes every edge to
 * u < v, sorts the edge list and rejects self-loops, parallel edges and
 * dangling endpoints. Vertex ids are the contiguous indices 0..n-1.
 */
class LabeledGraph {
 public:
  struct Neighbor {
    VertexId vertex;
    std::uint32_t edge;  // index into edges()
  };

  LabeledGraph() = default;
  LabeledGraph(std::vector<Label> vertex_labels, std::vector<Edge> edges,
               std::optional<std::string> name = std::nullopt);

  std::size_t num_vertices() const { return labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool empty() const { return labels_.empty(); }

  const Label& label(VertexId v) const { return labels_.at(v); }
  std::span<const Label> labels() const { return labels_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(VertexId v) const;

  bool has_edge(VertexId a, VertexId b) const { return find_edge(a, b) != nullptr; }
  // Null when a and b are not adjacent.
  const Edge* find_edge(VertexId a, VertexId b) const;

  const std::optional<std::string>& name() const { return name_; }
  LabeledGraph with_name(std::optional<std::string> name) const;

  bool operator==(const LabeledGraph& other) const;

 private:
  std::vector<Label> labels_;
  std::vector<Edge> edges_;
  // CSR adjacency, neighbors sorted by vertex id.
  std::vector<std::uint32_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::optional<std::string> name_;
};

}  // namespace ged
