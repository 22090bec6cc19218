#include "pair_context.hpp"

#include <map>
#include <string>

#include "gedkit/errors.hpp"

namespace ged::detail {

PairContext::PairContext(const LabeledGraph& a, const LabeledGraph& b, const CostModel& costs)
    : g1(a), g2(b), cm(costs), n1(a.num_vertices()), n2(b.num_vertices()), m2(b.num_edges()) {
  cm.validate();
  if (n2 >= 0xFFFF) {
    throw InvalidArgument("target graph has " + std::to_string(n2) +
                          " vertices; at most 65534 are supported");
  }

  std::map<Label, std::uint32_t> vertex_ids;
  auto intern_vertex = [&](const Label& l) {
    return vertex_ids.try_emplace(l, static_cast<std::uint32_t>(vertex_ids.size())).first->second;
  };
  vertex_label1.reserve(n1);
  vertex_label2.reserve(n2);
  for (const auto& l : g1.labels()) vertex_label1.push_back(intern_vertex(l));
  for (const auto& l : g2.labels()) vertex_label2.push_back(intern_vertex(l));
  vertex_label_count = vertex_ids.size();

  std::map<Label, std::uint16_t> edge_ids;
  auto intern_edge = [&](const Label& l) {
    auto it = edge_ids.find(l);
    if (it != edge_ids.end()) return it->second;
    if (edge_ids.size() + 1 >= 0xFFFF) throw InvalidArgument("too many distinct edge labels");
    return edge_ids.emplace(l, static_cast<std::uint16_t>(edge_ids.size() + 1)).first->second;
  };

  edge_rows.assign(n2 * n2, 0);
  for (const auto& e : g2.edges()) {
    const auto id = intern_edge(e.label);
    edge_rows[std::size_t{e.u} * n2 + e.v] = id;
    edge_rows[std::size_t{e.v} * n2 + e.u] = id;
  }

  prior.assign(n1, {});
  for (const auto& e : g1.edges()) {
    // Normalized edges have u < v, so u is the earlier endpoint.
    prior[e.v].push_back({e.u, intern_edge(e.label)});
  }
  edge_label_count = edge_ids.size();

  vertex_cost.resize(n1 * n2);
  for (std::size_t v = 0; v < n1; ++v) {
    for (std::size_t u = 0; u < n2; ++u) {
      vertex_cost[v * n2 + u] = vertex_label1[v] == vertex_label2[u] ? 0.0 : cm.vsub;
    }
  }
}

}  // namespace ged::detail
