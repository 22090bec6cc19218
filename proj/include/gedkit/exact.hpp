#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "gedkit/cost_model.hpp"
#include "gedkit/edit_path.hpp"
#include "gedkit/errors.hpp"
#include "gedkit/graph.hpp"
#include "gedkit/kbest.hpp"

namespace ged {

struct OracleConfig {
  // Maximum number of search nodes the DFS may enter.
  std::size_t node_limit = 200'000'000;
  bool use_bound = true;
  // Complete path used as the starting incumbent. Without it the greedy
  // K = 1 search provides one.
  std::optional<EditPath> seed_path;

  void validate() const;
};

// Thrown when the DFS exhausts its node budget. Carries the best complete
// path found so far (optimal == false).
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, GedResult incumbent)
      : Error(what), incumbent_(std::move(incumbent)) {}
  const GedResult& incumbent() const { return incumbent_; }

 private:
  GedResult incumbent_;
};

// Exact edit distance by depth-first branch and bound over the same search
// tree as ged_kbest (g1 vertices in index order, substitutions in ascending
// g2 order, then deletion, insertions at the leaves). A branch is pruned once
// ped + bound cannot beat the incumbent.
GedResult exact_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& cm,
                    const OracleConfig& cfg = {});

// Counting bound: unavoidable vertex deletions/insertions plus the edge
// count imbalance among edges whose endpoints are both unresolved.
double lower_bound(const SearchNode& node, const LabeledGraph& g1, const LabeledGraph& g2,
                   const CostModel& cm);

// Tighter admissible bound used by exact_ged. It refines the counting bound
// with label multisets (vertices and unresolved edges) and adds the degree
// imbalance of edges joining a resolved vertex to unresolved ones.
double label_lower_bound(const SearchNode& node, const LabeledGraph& g1, const LabeledGraph& g2,
                         const CostModel& cm);

inline constexpr std::size_t kExhaustiveVertexLimit = 8;

// Brute-force minimum over every complete path, each priced with path_cost.
// Throws TooLarge when |V1| + |V2| exceeds vertex_limit. The default keeps
// the enumeration instant; 5 + 5 vertices (1546 paths) is still cheap.
GedResult exhaustive_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& cm,
                         std::size_t vertex_limit = kExhaustiveVertexLimit);

}  // namespace ged
