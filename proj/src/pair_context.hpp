#pragma once

#include <cstdint>
#include <vector>

#include "gedkit/cost_model.hpp"
#include "gedkit/graph.hpp"
#include "gedkit/simd/kernels.hpp"

namespace ged::detail {

// Dense, label-interned view of a (g1, g2) pair shared by the search engines.
struct PairContext {
  struct Prior {
    VertexId source;      // earlier g1 neighbour of the branching vertex
    std::uint16_t label;  // 1-based edge label id
  };

  PairContext(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& cm);

  const LabeledGraph& g1;
  const LabeledGraph& g2;
  CostModel cm;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t m2 = 0;

  // n2 x n2, 0 = no edge, else 1-based edge label id.
  std::vector<std::uint16_t> edge_rows;
  // n1 x n2 vertex substitution costs.
  std::vector<double> vertex_cost;
  // For each g1 vertex v, its neighbours i < v.
  std::vector<std::vector<Prior>> prior;

  std::vector<std::uint32_t> vertex_label1;
  std::vector<std::uint32_t> vertex_label2;
  std::size_t vertex_label_count = 0;
  std::size_t edge_label_count = 0;  // ids run 1..edge_label_count

  const std::uint16_t* row(VertexId u) const { return edge_rows.data() + std::size_t{u} * n2; }
  const double* vertex_cost_row(VertexId v) const { return vertex_cost.data() + std::size_t{v} * n2; }

  double deletion_cost(VertexId v) const {
    return cm.vdel + cm.edel * static_cast<double>(prior[v].size());
  }

  // Terms of the substitution successors of v; resolved/match/same filled by caller.
  simd::SuccessorTerms substitution_terms(VertexId v) const {
    simd::SuccessorTerms t;
    t.vertex_cost = vertex_cost_row(v);
    t.base = cm.edel * static_cast<double>(prior[v].size());
    t.eins = cm.eins;
    t.match_coef = cm.esub - cm.edel - cm.eins;
    t.same_coef = -cm.esub;
    return t;
  }

  // Cost of inserting every unmapped g2 vertex once all g1 vertices are
  // resolved; `inner_edges` counts g2 edges between mapped vertices.
  double insertion_cost(std::size_t unmapped, std::size_t inner_edges) const {
    return cm.vins * static_cast<double>(unmapped) +
           cm.eins * static_cast<double>(m2 - inner_edges);
  }
};

}  // namespace ged::detail
