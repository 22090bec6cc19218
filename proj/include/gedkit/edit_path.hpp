#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gedkit/cost_model.hpp"
#include "gedkit/graph.hpp"

namespace ged {

// Vertex-centric edit operation. Edge edits are implied by the vertex
// operations and are never represented explicitly.
struct EditOp {
  enum class Kind : std::uint8_t { Substitute, Delete, Insert };

  Kind kind = Kind::Substitute;
  VertexId source = kNoVertex;  // g1 vertex, unused for Insert
  VertexId target = kNoVertex;  // g2 vertex, unused for Delete

  static EditOp substitute(VertexId v, VertexId u) { return {Kind::Substitute, v, u}; }
  static EditOp remove(VertexId v) { return {Kind::Delete, v, kNoVertex}; }
  static EditOp insert(VertexId u) { return {Kind::Insert, kNoVertex, u}; }

  bool touches_source() const { return kind != Kind::Insert; }
  bool touches_target() const { return kind != Kind::Delete; }

  bool operator==(const EditOp&) const = default;
};

std::string to_string(const EditOp& op);

struct EditPath {
  std::vector<EditOp> ops;
  double total_cost = 0.0;

  bool operator==(const EditPath&) const = default;
};

// Resolution state of every vertex of both graphs after some prefix of a
// path. forward[v] is the g2 image of g1 vertex v (kNoVertex when v is
// deleted or not yet resolved); the resolved flags distinguish the two.
struct PathMapping {
  std::vector<VertexId> forward;
  std::vector<VertexId> backward;
  std::vector<bool> source_resolved;
  std::vector<bool> target_resolved;

  bool complete() const;
};

// Validates op indices and the at-most-once rule over the first prefix_len
// ops and returns the resulting resolution state. Throws InvalidPath.
PathMapping resolve_path(const EditPath& path, const LabeledGraph& g1, const LabeledGraph& g2,
                         std::size_t prefix_len);
PathMapping resolve_path(const EditPath& path, const LabeledGraph& g1, const LabeledGraph& g2);

// Vertex cost of a single operation. Implied edges are not included.
// Throws InvalidOperation on out-of-range indices.
double op_cost(const EditOp& op, const LabeledGraph& g1, const LabeledGraph& g2,
               const CostModel& cm);

// Cost of a (partial or complete) path recomputed from scratch. An edge is
// charged once both of its endpoints are resolved, which makes the result
// independent of op order within the path.
double path_cost(const EditPath& path, const LabeledGraph& g1, const LabeledGraph& g2,
                 const CostModel& cm);

struct AppliedPath {
  LabeledGraph graph;
  // For each vertex of graph: its g2 counterpart once resolved, else kNoVertex.
  std::vector<VertexId> target_of;
  // For each vertex of graph: the g1 vertex it came from, kNoVertex if inserted.
  std::vector<VertexId> source_of;
};

// Applies the first prefix_len ops of path to g1. Surviving g1 vertices
// keep their relative order and come first; inserted vertices follow in
// op order. Edges between two resolved vertices mirror g2; edges touching
// an unresolved g1 vertex keep their g1 state. Throws RangeError when
// prefix_len exceeds the path length.
AppliedPath apply_edit_path_tracked(const LabeledGraph& g1, const EditPath& path,
                                    const LabeledGraph& g2, std::size_t prefix_len);
LabeledGraph apply_edit_path(const LabeledGraph& g1, const EditPath& path, const LabeledGraph& g2,
                             std::size_t prefix_len);

// Path that continues from apply_edit_path(g1, path, g2, prefix_len) to g2:
// resolved vertices are substituted onto their g2 counterpart, the
// remaining ops are replayed on the intermediate graph's indices, in
// intermediate vertex order followed by the outstanding insertions. The
// returned path is priced under cm.
EditPath continuation_path(const LabeledGraph& g1, const EditPath& path, const LabeledGraph& g2,
                           std::size_t prefix_len, const CostModel& cm);

// mapping[i] is the vertex of b that vertex i of a corresponds to. Throws
// InvalidMapping when mapping is not a bijection between the vertex sets.
bool graphs_equal_under_mapping(const LabeledGraph& a, const LabeledGraph& b,
                                const std::vector<VertexId>& mapping);

// True when path re-prices to reported_cost within kCostTolerance, is
// complete, and applying it reconstructs g2 under its own vertex mapping.
struct WitnessCheck {
  bool cost_matches = false;
  bool complete = false;
  bool reconstructs_target = false;
  double recomputed_cost = 0.0;

  bool ok() const { return cost_matches && complete && reconstructs_target; }
};

WitnessCheck verify_witness(const EditPath& path, double reported_cost, const LabeledGraph& g1,
                            const LabeledGraph& g2, const CostModel& cm);

}  // namespace ged
