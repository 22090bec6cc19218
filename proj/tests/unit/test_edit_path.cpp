#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "gedkit/edit_path.hpp"
#include "gedkit/errors.hpp"
#include "gedkit/kbest.hpp"
#include "support.hpp"

using namespace ged;
using gtest::graph;

namespace {

// Random complete path: a random partial injection g1 -> g2, the rest
// deleted / inserted, ops shuffled.
EditPath random_complete_path(const LabeledGraph& g1, const LabeledGraph& g2, gtest::Rng& rng) {
  std::vector<VertexId> targets(g2.num_vertices());
  std::iota(targets.begin(), targets.end(), 0);
  for (std::size_t i = targets.size(); i > 1; --i) std::swap(targets[i - 1], targets[rng.below(i)]);
  EditPath p;
  std::size_t next = 0;
  for (VertexId v = 0; v < g1.num_vertices(); ++v) {
    if (next < targets.size() && rng.below(4) != 0) {
      p.ops.push_back(EditOp::substitute(v, targets[next++]));
    } else {
      p.ops.push_back(EditOp::remove(v));
    }
  }
  for (; next < targets.size(); ++next) p.ops.push_back(EditOp::insert(targets[next]));
  for (std::size_t i = p.ops.size(); i > 1; --i) std::swap(p.ops[i - 1], p.ops[rng.below(i)]);
  return p;
}

}  // namespace

TEST_CASE("op_cost") {
  CostModel cm;
  auto c = gtest::k1("C");
  auto n = gtest::k1("N");
  CHECK(op_cost(EditOp::substitute(0, 0), c, c, cm) == 0.0);
  CHECK(op_cost(EditOp::substitute(0, 0), c, n, cm) == 2.0);
  CHECK(op_cost(EditOp::remove(0), c, n, cm) == 4.0);
  CHECK(op_cost(EditOp::insert(0), c, n, cm) == 4.0);
  CHECK_THROWS_AS(op_cost(EditOp::substitute(1, 0), c, n, cm), InvalidOperation);
  CHECK_THROWS_AS(op_cost(EditOp::insert(3), c, n, cm), InvalidOperation);
}

TEST_CASE("path_cost examples") {
  CostModel cm;
  CHECK(path_cost({{EditOp::substitute(0, 0)}}, gtest::k1(), gtest::k1(), cm) == 0.0);
  EditPath p2k1{{EditOp::substitute(0, 0), EditOp::remove(1)}};
  CHECK(path_cost(p2k1, gtest::p2(), gtest::k1(), cm) == 6.0);
  EditPath tri{{EditOp::substitute(0, 0), EditOp::substitute(1, 1), EditOp::substitute(2, 2)}};
  CHECK(path_cost(tri, gtest::triangle(), gtest::p3(), cm) == 2.0);
  // Edge label mismatch costs esub.
  auto a = graph({"A", "A"}, {{0, 1}}, "x");
  auto b = graph({"A", "A"}, {{0, 1}}, "y");
  CHECK(path_cost({{EditOp::substitute(0, 0), EditOp::substitute(1, 1)}}, a, b, cm) == 1.0);
}

TEST_CASE("path validation") {
  CostModel cm;
  auto g = gtest::p2();
  EditPath dup{{EditOp::substitute(0, 0), EditOp::substitute(0, 1)}};
  CHECK_THROWS_AS(path_cost(dup, g, g, cm), InvalidPath);
  EditPath dup_target{{EditOp::substitute(0, 0), EditOp::insert(0)}};
  CHECK_THROWS_AS(path_cost(dup_target, g, g, cm), InvalidPath);
  EditPath range{{EditOp::remove(7)}};
  CHECK_THROWS_AS(resolve_path(range, g, g), InvalidPath);
  EditPath partial{{EditOp::substitute(0, 1)}};
  CHECK_FALSE(resolve_path(partial, g, g).complete());
}

TEST_CASE("path_cost is order independent and monotone in the prefix") {
  CostModel cm{2, 4, 3, 1, 2, 5};
  gtest::Rng rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    auto g1 = gtest::random_graph(1 + rng.below(6), rng.unit(), rng.next());
    auto g2 = gtest::random_graph(1 + rng.below(6), rng.unit(), rng.next());
    auto p = random_complete_path(g1, g2, rng);
    const double full = path_cost(p, g1, g2, cm);
    CHECK(full >= 0.0);
    double prev = 0.0;
    for (std::size_t len = 0; len <= p.ops.size(); ++len) {
      EditPath prefix{{p.ops.begin(), p.ops.begin() + static_cast<std::ptrdiff_t>(len)}};
      const double c = path_cost(prefix, g1, g2, cm);
      CHECK(c >= prev - kCostTolerance);
      prev = c;
    }
    auto q = p;
    std::reverse(q.ops.begin(), q.ops.end());
    CHECK(costs_equal(path_cost(q, g1, g2, cm), full));

    // Summing op costs and implied edge costs step by step charges every
    // edge exactly once, whatever the op order.
    SearchNode node = SearchNode::root(g1, g2);
    double incremental = 0.0;
    for (const auto& op : p.ops) {
      incremental += op_cost(op, g1, g2, cm) + implied_edge_cost(node, op, g1, g2, cm);
      node.path.ops.push_back(op);
    }
    CHECK(costs_equal(incremental, full));
  }
}

TEST_CASE("every edge is charged exactly once") {
  // Zero vertex costs and esub; edel = 1, eins = 1000 makes the cost an
  // exact count of deleted and inserted edges.
  CostModel cm{0, 0, 0, 0, 1, 1000};
  gtest::Rng rng(5);
  for (int iter = 0; iter < 200; ++iter) {
    auto g1 = gtest::random_graph(1 + rng.below(6), rng.unit(), rng.next(), {"A"}, {"e"});
    auto g2 = gtest::random_graph(1 + rng.below(6), rng.unit(), rng.next(), {"A"}, {"e"});
    auto p = random_complete_path(g1, g2, rng);
    const auto m = resolve_path(p, g1, g2);
    std::size_t kept = 0;
    for (const auto& e : g1.edges()) {
      const auto a = m.forward[e.u], b = m.forward[e.v];
      if (a != kNoVertex && b != kNoVertex && g2.has_edge(a, b)) ++kept;
    }
    const double cost = path_cost(p, g1, g2, cm);
    const auto deleted = g1.num_edges() - kept;
    const auto inserted = g2.num_edges() - kept;
    CHECK(cost == doctest::Approx(static_cast<double>(deleted) + 1000.0 * static_cast<double>(inserted)));
  }
}

TEST_CASE("apply_edit_path") {
  CostModel cm;
  EditPath p2k1{{EditOp::substitute(0, 0), EditOp::remove(1)}};
  CHECK(apply_edit_path(gtest::p2(), p2k1, gtest::k1(), 0) == gtest::p2());
  auto out = apply_edit_path(gtest::p2(), p2k1, gtest::k1(), 2);
  CHECK(out.num_vertices() == 1);
  CHECK(out.num_edges() == 0);
  CHECK_THROWS_AS(apply_edit_path(gtest::p2(), p2k1, gtest::k1(), 3), RangeError);

  // Substituted vertices take the g2 label; edges between unresolved
  // vertices stay as in g1.
  auto g1 = graph({"A", "B", "C"}, {{1, 2}});
  auto g2 = graph({"X", "Y"}, {{0, 1}});
  EditPath p{{EditOp::substitute(0, 1), EditOp::remove(1), EditOp::substitute(2, 0)}};
  auto half = apply_edit_path_tracked(g1, p, g2, 1);
  CHECK(half.graph.label(0) == Label{"Y"});
  CHECK(half.graph.has_edge(1, 2));
  CHECK(half.target_of[0] == 1);
  CHECK(half.target_of[1] == kNoVertex);
}

TEST_CASE("full application reconstructs g2 and prefixes continue to it") {
  CostModel cm;
  gtest::Rng rng(3);
  for (int iter = 0; iter < 200; ++iter) {
    auto g1 = gtest::random_graph(rng.below(7), rng.unit(), rng.next());
    auto g2 = gtest::random_graph(rng.below(7), rng.unit(), rng.next());
    auto p = random_complete_path(g1, g2, rng);
    p.total_cost = path_cost(p, g1, g2, cm);
    auto full = apply_edit_path_tracked(g1, p, g2, p.ops.size());
    CHECK(graphs_equal_under_mapping(full.graph, g2, full.target_of));
    CHECK(verify_witness(p, p.total_cost, g1, g2, cm).ok());

    const std::size_t cut = rng.below(p.ops.size() + 1);
    auto mid = apply_edit_path(g1, p, g2, cut);
    auto rest = continuation_path(g1, p, g2, cut, cm);
    CHECK(costs_equal(rest.total_cost, path_cost(rest, mid, g2, cm)));
    auto end = apply_edit_path_tracked(mid, rest, g2, rest.ops.size());
    CHECK(graphs_equal_under_mapping(end.graph, g2, end.target_of));
  }
}

TEST_CASE("graphs_equal_under_mapping") {
  CHECK(graphs_equal_under_mapping(gtest::k1("C"), gtest::k1("C"), {0}));
  CHECK_FALSE(graphs_equal_under_mapping(gtest::k1("C"), gtest::k1("N"), {0}));
  CHECK_FALSE(graphs_equal_under_mapping(gtest::triangle(), gtest::p3(), {0, 1, 2}));
  CHECK_FALSE(graphs_equal_under_mapping(gtest::triangle(), gtest::p3(), {2, 0, 1}));
  CHECK(graphs_equal_under_mapping(gtest::p3(), gtest::p3(), {2, 1, 0}));
  CHECK_THROWS_AS(graphs_equal_under_mapping(gtest::p3(), gtest::p3(), {0, 0, 1}), InvalidMapping);
  CHECK_THROWS_AS(graphs_equal_under_mapping(gtest::p3(), gtest::p2(), {0, 1}), InvalidMapping);
}

TEST_CASE("verify_witness flags bad witnesses") {
  CostModel cm;
  EditPath p{{EditOp::substitute(0, 0), EditOp::remove(1)}, 6.0};
  CHECK(verify_witness(p, 6.0, gtest::p2(), gtest::k1(), cm).ok());
  auto wrong_cost = verify_witness(p, 5.0, gtest::p2(), gtest::k1(), cm);
  CHECK_FALSE(wrong_cost.cost_matches);
  CHECK(wrong_cost.recomputed_cost == 6.0);
  EditPath incomplete{{EditOp::substitute(0, 0)}};
  CHECK_FALSE(verify_witness(incomplete, 0.0, gtest::p2(), gtest::k1(), cm).complete);
}
