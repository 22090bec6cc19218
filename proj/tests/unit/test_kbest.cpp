#include <algorithm>
#include <cstring>

#include "doctest.h"
#include "gedkit/errors.hpp"
#include "gedkit/exact.hpp"
#include "gedkit/kbest.hpp"
#include "gedkit/topk.hpp"
#include "support.hpp"

using namespace ged;
using gtest::graph;

namespace {

SearchNode node_after(const LabeledGraph& g1, const LabeledGraph& g2, std::vector<EditOp> ops,
                      const CostModel& cm) {
  SearchNode n = SearchNode::root(g1, g2);
  n.path.ops = std::move(ops);
  for (const auto& op : n.path.ops) {
    if (op.touches_target()) n.target_used[op.target] = true;
    if (op.touches_source()) n.next_source = std::max<VertexId>(n.next_source, op.source + 1);
  }
  n.ped = path_cost(n.path, g1, g2, cm);
  n.path.total_cost = n.ped;
  return n;
}

EngineConfig config(std::size_t k, CostModel cm = {}, unsigned workers = 1) {
  EngineConfig c;
  c.k = k;
  c.cost_model = cm;
  c.worker_count = workers;
  return c;
}

// Straightforward level-wise search built from branch(), select_k_smallest
// and finalize_insertions.
GedResult reference_kbest(const LabeledGraph& g1, const LabeledGraph& g2, std::size_t k,
                          const CostModel& cm, std::vector<std::vector<SearchNode>>* levels) {
  std::vector<SearchNode> frontier{SearchNode::root(g1, g2)};
  for (VertexId v = 0; v < g1.num_vertices(); ++v) {
    std::vector<SearchNode> succ;
    for (const auto& n : frontier) {
      for (auto& s : branch(n, v, g1, g2, cm)) succ.push_back(std::move(s));
    }
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < succ.size(); ++i) cands.push_back({succ[i].ped, i});
    frontier.clear();
    for (const auto& c : select_k_smallest(cands, k)) frontier.push_back(succ[c.tag]);
    levels->push_back(frontier);
  }
  GedResult best;
  bool first = true;
  for (const auto& n : frontier) {
    auto leaf = finalize_insertions(n, g1, g2, cm);
    if (first || leaf.ped < best.distance - kCostTolerance) {
      best.distance = leaf.ped;
      best.path = leaf.path;
      first = false;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("branch") {
  CostModel cm;
  auto g4 = graph({"A", "A", "A", "A"}, {{0, 1}, {2, 3}});
  CHECK(branch(SearchNode::root(g4, g4), 0, g4, g4, cm).size() == 5);

  auto late = node_after(g4, g4,
                         {EditOp::substitute(0, 0), EditOp::substitute(1, 1), EditOp::substitute(2, 2)}, cm);
  CHECK(late.remaining_targets() == 1);
  auto two = branch(late, 3, g4, g4, cm);
  REQUIRE(two.size() == 2);
  CHECK(two[0].path.ops.back() == EditOp::substitute(3, 3));
  CHECK(two[1].path.ops.back() == EditOp::remove(3));

  auto kids = branch(SearchNode::root(gtest::p2(), gtest::k1()), 0, gtest::p2(), gtest::k1(), cm);
  REQUIRE(kids.size() == 2);
  CHECK(kids[0].ped == 0.0);
  CHECK(kids[1].ped == 4.0);
  CHECK(kids[0].next_source == 1);

  CHECK_THROWS_AS(branch(SearchNode::root(g4, g4), 1, g4, g4, cm), InvalidState);
  CHECK_THROWS_AS(branch(late, 2, g4, g4, cm), InvalidState);
}

TEST_CASE("implied_edge_cost cases") {
  CostModel cm;
  auto node = [&](const LabeledGraph& g1, const LabeledGraph& g2) {
    return node_after(g1, g2, {EditOp::substitute(0, 0)}, cm);
  };
  auto edge = gtest::p2();
  auto none = graph({"A", "A"}, {});
  const auto op = EditOp::substitute(1, 1);
  CHECK(implied_edge_cost(node(edge, edge), op, edge, edge, cm) == 0.0);
  CHECK(implied_edge_cost(node(edge, none), op, edge, none, cm) == 2.0);
  CHECK(implied_edge_cost(node(none, edge), op, none, edge, cm) == 2.0);
  CHECK(implied_edge_cost(node(edge, edge), EditOp::remove(1), edge, edge, cm) == 2.0);
  // Edges to unresolved vertices are deferred.
  CHECK(implied_edge_cost(SearchNode::root(edge, edge), EditOp::substitute(0, 0), edge, edge, cm) == 0.0);
}

TEST_CASE("finalize_insertions") {
  CostModel cm;
  auto k1 = gtest::k1();
  auto p2 = gtest::p2();
  auto tri = gtest::triangle();
  auto same = node_after(p2, p2, {EditOp::substitute(0, 0), EditOp::substitute(1, 1)}, cm);
  auto fin = finalize_insertions(same, p2, p2, cm);
  CHECK(fin.path == same.path);
  CHECK(fin.ped == same.ped);

  auto a = finalize_insertions(node_after(k1, p2, {EditOp::substitute(0, 0)}, cm), k1, p2, cm);
  CHECK(a.ped == 6.0);
  CHECK(a.path.ops.back() == EditOp::insert(1));
  auto b = finalize_insertions(node_after(k1, tri, {EditOp::substitute(0, 0)}, cm), k1, tri, cm);
  CHECK(b.ped == 14.0);
  CHECK(b.path.ops.size() == 3);

  CHECK_THROWS_AS(finalize_insertions(SearchNode::root(p2, p2), p2, p2, cm), InvalidState);
}

TEST_CASE("ged_kbest small cases") {
  CostModel cm;
  gtest::Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    auto g = gtest::random_graph(1 + rng.below(9), rng.unit(), rng.next());
    auto r = ged_kbest(g, g, config(1));
    CHECK(r.distance == 0.0);
  }
  auto r = ged_kbest(gtest::p2(), gtest::k1(), config(2));
  CHECK(r.distance == 6.0);
  CHECK(verify_witness(r.path, r.distance, gtest::p2(), gtest::k1(), cm).ok());
  CHECK(r.path.total_cost == r.distance);

  LabeledGraph empty;
  auto ins = ged_kbest(empty, gtest::triangle(), config(5));
  CHECK(ins.distance == 3 * 4.0 + 3 * 2.0);
  auto del = ged_kbest(gtest::triangle(), empty, config(5));
  CHECK(del.distance == 3 * 4.0 + 3 * 2.0);
  CHECK(ged_kbest(empty, empty, config(1)).distance == 0.0);

  CHECK_THROWS_AS(ged_kbest(gtest::p2(), gtest::p2(), config(0)), InvalidArgument);
  auto bad = config(1);
  bad.worker_count = 0;
  CHECK_THROWS_AS(ged_kbest(gtest::p2(), gtest::p2(), bad), InvalidArgument);
}

TEST_CASE("frontier peds equal path_cost and match a branch/select reference") {
  gtest::Rng rng(77);
  for (int iter = 0; iter < 120; ++iter) {
    const CostModel cm = iter % 3 == 0 ? CostModel::uniform() : iter % 3 == 1 ? CostModel{} : CostModel{3, 1, 5, 2, 1, 4};
    auto g1 = gtest::random_graph(rng.below(8), rng.unit(), rng.next());
    auto g2 = gtest::random_graph(rng.below(8), rng.unit(), rng.next());
    const std::size_t k = 1 + rng.below(40);

    std::vector<FrontierSnapshot> snaps;
    auto cfg = config(k, cm);
    auto res = ged_kbest(g1, g2, cfg, [&](const FrontierSnapshot& s) { snaps.push_back(s); });
    CHECK(verify_witness(res.path, res.distance, g1, g2, cm).ok());

    for (const auto& s : snaps) {
      CHECK(s.nodes.size() <= k);
      for (const auto& n : s.nodes) {
        CHECK(costs_equal(n.ped, path_cost(n.path, g1, g2, cm)));
        if (s.finalized) CHECK(resolve_path(n.path, g1, g2).complete());
      }
    }

    std::vector<std::vector<SearchNode>> ref_levels;
    auto ref = reference_kbest(g1, g2, k, cm, &ref_levels);
    CHECK(ref.distance == res.distance);
    CHECK(ref.path.ops == res.path.ops);
    std::size_t level = 0;
    for (const auto& s : snaps) {
      if (s.finalized) continue;
      REQUIRE(level < ref_levels.size());
      REQUIRE(s.nodes.size() == ref_levels[level].size());
      for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        CHECK(s.nodes[i].path.ops == ref_levels[level][i].path.ops);
        CHECK(s.nodes[i].ped == ref_levels[level][i].ped);
      }
      ++level;
    }
    CHECK(level == g1.num_vertices());
  }
}

TEST_CASE("level statistics respect the width bounds") {
  auto g1 = gtest::random_graph(9, 0.5, 1);
  auto g2 = gtest::random_graph(8, 0.4, 2);
  const std::size_t k = 50;
  auto r = ged_kbest(g1, g2, config(k));
  REQUIRE(r.levels.size() == g1.num_vertices());
  for (const auto& l : r.levels) {
    CHECK(l.frontier_size <= k);
    CHECK(l.candidate_count <= k * (g2.num_vertices() + 1));
    CHECK(l.retained <= k);
    CHECK(l.min_ped <= l.max_ped);
  }
  CHECK(r.levels.back().retained == k);
}

TEST_CASE("results do not depend on the worker count") {
  gtest::Rng rng(12);
  for (int iter = 0; iter < 15; ++iter) {
    auto g1 = gtest::random_graph(6 + rng.below(8), rng.unit(), rng.next());
    auto g2 = gtest::random_graph(6 + rng.below(8), rng.unit(), rng.next());
    const std::size_t k = 1 + rng.below(3000);
    auto base = ged_kbest(g1, g2, config(k, {}, 1));
    for (unsigned w : {2u, 4u, 8u}) {
      auto r = ged_kbest(g1, g2, config(k, {}, w));
      CHECK(r.distance == base.distance);
      CHECK(r.path == base.path);
    }
  }
}

TEST_CASE("larger K never hurts on exhaustive width and reaches the optimum") {
  gtest::Rng rng(4);
  for (int iter = 0; iter < 40; ++iter) {
    auto g1 = gtest::random_graph(1 + rng.below(4), rng.unit(), rng.next());
    auto g2 = gtest::random_graph(1 + rng.below(4), rng.unit(), rng.next());
    std::size_t width = 1;
    for (std::size_t i = 0; i < g1.num_vertices(); ++i) width *= g2.num_vertices() + 1;
    auto full = ged_kbest(g1, g2, config(width));
    auto exact = exhaustive_ged(g1, g2, CostModel{});
    CHECK(full.distance == exact.distance);
  }
}

TEST_CASE("capacity guard") {
  auto g = gtest::random_graph(12, 0.5, 3);
  auto cfg = config(100000);
  cfg.memory_limit_bytes = 1 << 16;
  try {
    ged_kbest(g, g, cfg);
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(std::strstr(e.what(), "level") != nullptr);
  }
  CHECK(kbest_level_bytes(10, 10, 100, 1100) > kbest_level_bytes(10, 10, 10, 110));
}
