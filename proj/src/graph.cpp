#include "gedkit/graph.hpp"

#include <algorithm>
#include <string>

#include "gedkit/errors.hpp"

namespace ged {

LabeledGraph::LabeledGraph(std::vector<Label> vertex_labels, std::vector<Edge> edges,
                           std::optional<std::string> name)
    : labels_(std::move(vertex_labels)), edges_(std::move(edges)), name_(std::move(name)) {
  const auto n = labels_.size();
  if (n >= kNoVertex) throw InvalidGraph("too many vertices");
  for (auto& e : edges_) {
    if (e.u >= n || e.v >= n) {
      throw InvalidGraph("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") references a vertex outside 0.." + std::to_string(n));
    }
    if (e.u == e.v) throw InvalidGraph("self-loop on vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw InvalidGraph("duplicate edge (" + std::to_string(edges_[i].u) + "," +
                         std::to_string(edges_[i].v) + ")");
    }
  }

  std::vector<std::uint32_t> degree(n, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n]);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    adjacency_[fill[edges_[i].u]++] = {edges_[i].v, i};
    adjacency_[fill[edges_[i].v]++] = {edges_[i].u, i};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
}

std::span<const LabeledGraph::Neighbor> LabeledGraph::neighbors(VertexId v) const {
  if (v >= labels_.size()) return {};
  return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
}

const Edge* LabeledGraph::find_edge(VertexId a, VertexId b) const {
  auto nbrs = neighbors(a);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                             [](const Neighbor& n, VertexId x) { return n.vertex < x; });
  if (it == nbrs.end() || it->vertex != b) return nullptr;
  return &edges_[it->edge];
}

LabeledGraph LabeledGraph::with_name(std::optional<std::string> name) const {
  LabeledGraph copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

bool LabeledGraph::operator==(const LabeledGraph& other) const {
  return labels_ == other.labels_ && edges_ == other.edges_ && name_ == other.name_;
}

}  // namespace ged
