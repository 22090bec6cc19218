#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gedkit/cost_model.hpp"
#include "gedkit/edit_path.hpp"
#include "gedkit/graph.hpp"

namespace ged {

/*
 * A node of the level-wise search tree.
 *
 * g1 vertices are processed in index order, so the remaining g1 vertices are
 * always the suffix next_source..n1-1. target_used marks the g2 vertices
 * already consumed by the path; the rest form the remaining g2 set.
 */
struct SearchNode {
  EditPath path;
  VertexId next_source = 0;
  std::vector<bool> target_used;
  double ped = 0.0;

  static SearchNode root(const LabeledGraph& g1, const LabeledGraph& g2);

  std::size_t remaining_sources(const LabeledGraph& g1) const {
    return g1.num_vertices() - next_source;
  }
  std::size_t remaining_targets() const;
};

// Edge cost implied by appending new_op to node.path: every edge between the
// vertices touched by new_op and those of earlier ops is charged now (its
// second endpoint becomes resolved). Insertions are accepted too, which is
// how finalize_insertions prices the trailing insert ops.
double implied_edge_cost(const SearchNode& node, const EditOp& new_op, const LabeledGraph& g1,
                         const LabeledGraph& g2, const CostModel& cm);

// Successors of node on g1 vertex v: one substitution per remaining g2
// vertex in ascending index order, then the deletion. Throws InvalidState if
// v is not the next unprocessed g1 vertex.
std::vector<SearchNode> branch(const SearchNode& node, VertexId v, const LabeledGraph& g1,
                               const LabeledGraph& g2, const CostModel& cm);

// Inserts every remaining g2 vertex in ascending order. Throws InvalidState
// while g1 vertices remain.
SearchNode finalize_insertions(const SearchNode& node, const LabeledGraph& g1,
                               const LabeledGraph& g2, const CostModel& cm);

struct LevelStats {
  std::size_t level = 0;            // index of the g1 vertex branched on
  std::size_t frontier_size = 0;    // nodes expanded
  std::size_t candidate_count = 0;  // successors evaluated
  std::size_t retained = 0;         // successors kept for the next level
  double min_ped = 0.0;
  double max_ped = 0.0;
};

struct GedResult {
  double distance = 0.0;
  EditPath path;
  std::vector<LevelStats> levels;
  // Set by the exact solvers once optimality is proven.
  bool optimal = false;
  std::size_t expanded_nodes = 0;
};

struct EngineConfig {
  std::size_t k = 700000;
  CostModel cost_model;
  unsigned worker_count = 1;
  bool level_stats = true;
  // Upper bound on candidate + frontier buffers; 0 picks the physical memory
  // size reported by the OS.
  std::size_t memory_limit_bytes = 0;

  void validate() const;
};

// Observer hook: after every level it receives the retained frontier (level
// = number of processed g1 vertices); after finalization it receives the
// completed leaves with finalized = true.
struct FrontierSnapshot {
  std::size_t level = 0;
  bool finalized = false;
  std::vector<SearchNode> nodes;
};
using FrontierObserver = std::function<void(const FrontierSnapshot&)>;

// K-Best level-wise search. The result is the cheapest completed leaf and is
// always a realizable edit path, hence an upper bound on the exact distance.
// Throws CapacityError when a level's buffers exceed the memory limit.
GedResult ged_kbest(const LabeledGraph& g1, const LabeledGraph& g2, const EngineConfig& cfg,
                    const FrontierObserver& observer = {});

// Bytes the engine needs at one level for `frontier` retained nodes and
// `candidates` evaluated successors.
std::size_t kbest_level_bytes(std::size_t n1, std::size_t n2, std::size_t frontier,
                              std::size_t candidates);

}  // namespace ged
