#include "gedkit/kbest.hpp"

#include <unistd.h>

#include <algorithm>
#include <limits>
#include <new>
#include <string>

#include "gedkit/errors.hpp"
#include "gedkit/simd/kernels.hpp"
#include "gedkit/topk.hpp"
#include "pair_context.hpp"

namespace ged {

// ---------------------------------------------------------------------------
// Per-node reference operations

SearchNode SearchNode::root(const LabeledGraph& g1, const LabeledGraph& g2) {
  (void)g1;
  SearchNode node;
  node.target_used.assign(g2.num_vertices(), false);
  return node;
}

std::size_t SearchNode::remaining_targets() const {
  return static_cast<std::size_t>(std::count(target_used.begin(), target_used.end(), false));
}

double implied_edge_cost(const SearchNode& node, const EditOp& new_op, const LabeledGraph& g1,
                         const LabeledGraph& g2, const CostModel& cm) {
  double cost = 0.0;
  for (const auto& prev : node.path.ops) {
    const Edge* e1 = (new_op.touches_source() && prev.touches_source())
                         ? g1.find_edge(new_op.source, prev.source)
                         : nullptr;
    const Edge* e2 = (new_op.touches_target() && prev.touches_target())
                         ? g2.find_edge(new_op.target, prev.target)
                         : nullptr;
    // An edge only survives into g2 when both endpoints are substituted.
    const bool both_mapped =
        new_op.kind == EditOp::Kind::Substitute && prev.kind == EditOp::Kind::Substitute;
    if (e1 && e2 && both_mapped) {
      cost += cm.edge_substitution(e1->label, e2->label);
    } else {
      if (e1) cost += cm.edel;
      if (e2) cost += cm.eins;
    }
  }
  return cost;
}

std::vector<SearchNode> branch(const SearchNode& node, VertexId v, const LabeledGraph& g1,
                               const LabeledGraph& g2, const CostModel& cm) {
  if (v >= g1.num_vertices() || v != node.next_source) {
    throw InvalidState("cannot branch on g1 vertex " + std::to_string(v) +
                       ": next unprocessed vertex is " + std::to_string(node.next_source));
  }
  if (node.target_used.size() != g2.num_vertices()) {
    throw InvalidState("search node does not belong to this graph pair");
  }
  std::vector<SearchNode> out;
  out.reserve(node.remaining_targets() + 1);
  auto extend = [&](const EditOp& op) {
    SearchNode child = node;
    child.ped = node.ped + op_cost(op, g1, g2, cm) + implied_edge_cost(node, op, g1, g2, cm);
    child.path.ops.push_back(op);
    child.path.total_cost = child.ped;
    child.next_source = v + 1;
    if (op.touches_target()) child.target_used[op.target] = true;
    out.push_back(std::move(child));
  };
  for (VertexId u = 0; u < g2.num_vertices(); ++u) {
    if (!node.target_used[u]) extend(EditOp::substitute(v, u));
  }
  extend(EditOp::remove(v));
  return out;
}

SearchNode finalize_insertions(const SearchNode& node, const LabeledGraph& g1,
                               const LabeledGraph& g2, const CostModel& cm) {
  if (node.next_source != g1.num_vertices()) {
    throw InvalidState("cannot finalize: " + std::to_string(node.remaining_sources(g1)) +
                       " g1 vertices remain");
  }
  SearchNode out = node;
  for (VertexId u = 0; u < g2.num_vertices(); ++u) {
    if (out.target_used[u]) continue;
    const auto op = EditOp::insert(u);
    out.ped += cm.vins + implied_edge_cost(out, op, g1, g2, cm);
    out.path.ops.push_back(op);
    out.target_used[u] = true;
  }
  out.path.total_cost = out.ped;
  return out;
}

// ---------------------------------------------------------------------------
// Batched engine

void EngineConfig::validate() const {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (worker_count == 0) throw InvalidArgument("worker_count must be at least 1");
  cost_model.validate();
}

std::size_t kbest_level_bytes(std::size_t n1, std::size_t n2, std::size_t frontier,
                              std::size_t candidates) {
  // cost + parent + target per candidate, plus selection scratch.
  const std::size_t per_candidate = sizeof(double) * 2 + sizeof(std::uint32_t) * 2;
  const std::size_t per_node = sizeof(VertexId) * n1 + 3 * n2 + sizeof(double) + sizeof(std::uint32_t);
  return candidates * per_candidate + 2 * frontier * per_node;
}

namespace {

std::size_t physical_memory() {
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(pages) * static_cast<std::size_t>(page);
}

// Structure-of-arrays frontier. Row f of `map` holds the image of g1 vertices
// 0..level-1 (kNoVertex = deleted).
struct Frontier {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t size = 0;
  std::vector<VertexId> map;
  std::vector<std::uint8_t> used;
  std::vector<std::uint16_t> resolved;  // mapped g2 neighbours per g2 vertex
  std::vector<std::uint32_t> mapped;
  std::vector<double> ped;

  Frontier(std::size_t a, std::size_t b) : n1(a), n2(b) {}

  void resize(std::size_t count) {
    size = count;
    map.resize(count * n1);
    used.resize(count * n2);
    resolved.resize(count * n2);
    mapped.resize(count);
    ped.resize(count);
  }

  VertexId* map_row(std::size_t f) { return map.data() + f * n1; }
  std::uint8_t* used_row(std::size_t f) { return used.data() + f * n2; }
  std::uint16_t* resolved_row(std::size_t f) { return resolved.data() + f * n2; }
};

SearchNode to_search_node(Frontier& fr, std::size_t f, std::size_t level) {
  SearchNode node;
  const VertexId* m = fr.map_row(f);
  for (std::size_t i = 0; i < level; ++i) {
    const auto v = static_cast<VertexId>(i);
    node.path.ops.push_back(m[i] == kNoVertex ? EditOp::remove(v) : EditOp::substitute(v, m[i]));
  }
  node.next_source = static_cast<VertexId>(level);
  const std::uint8_t* used = fr.used_row(f);
  node.target_used.assign(used, used + fr.n2);
  node.ped = fr.ped[f];
  node.path.total_cost = node.ped;
  return node;
}

std::size_t inner_edges(Frontier& fr, std::size_t f) {
  const std::uint8_t* used = fr.used_row(f);
  const std::uint16_t* res = fr.resolved_row(f);
  std::size_t twice = 0;
  for (std::size_t u = 0; u < fr.n2; ++u) {
    if (used[u]) twice += res[u];
  }
  return twice / 2;
}

}  // namespace

GedResult ged_kbest(const LabeledGraph& g1, const LabeledGraph& g2, const EngineConfig& cfg,
                    const FrontierObserver& observer) {
  cfg.validate();
  const detail::PairContext ctx(g1, g2, cfg.cost_model);
  const auto& kern = simd::kernels();
  const std::size_t n1 = ctx.n1;
  const std::size_t n2 = ctx.n2;
  const unsigned workers = cfg.worker_count;
  const std::size_t limit = cfg.memory_limit_bytes ? cfg.memory_limit_bytes : physical_memory();

  GedResult result;
  Frontier cur(n1, n2);
  Frontier next(n1, n2);
  cur.resize(1);
  std::fill(cur.map.begin(), cur.map.end(), kNoVertex);
  std::fill(cur.used.begin(), cur.used.end(), 0);
  std::fill(cur.resolved.begin(), cur.resolved.end(), 0);
  cur.mapped[0] = 0;
  cur.ped[0] = 0.0;

  std::vector<std::size_t> offsets;
  std::vector<double> cand_cost;
  std::vector<std::uint32_t> cand_parent;
  std::vector<VertexId> cand_target;

  for (std::size_t level = 0; level < n1; ++level) {
    const auto v = static_cast<VertexId>(level);
    const std::size_t frontier = cur.size;
    offsets.assign(frontier + 1, 0);
    for (std::size_t f = 0; f < frontier; ++f) {
      offsets[f + 1] = offsets[f] + (n2 - cur.mapped[f]) + 1;
    }
    const std::size_t candidates = offsets[frontier];
    const std::size_t retained = std::min(cfg.k, candidates);
    if (candidates > std::numeric_limits<std::uint32_t>::max() ||
        kbest_level_bytes(n1, n2, retained, candidates) > limit) {
      throw CapacityError("level " + std::to_string(level) + ": " + std::to_string(candidates) +
                          " candidates exceed the memory limit of " + std::to_string(limit) +
                          " bytes");
    }
    try {
      cand_cost.resize(candidates);
      cand_parent.resize(candidates);
      cand_target.resize(candidates);
      next.resize(retained);
    } catch (const std::bad_alloc&) {
      throw CapacityError("level " + std::to_string(level) + ": allocation of " +
                          std::to_string(candidates) + " candidates failed");
    }

    const double deletion = ctx.deletion_cost(v);
    const auto& priors = ctx.prior[v];
#pragma omp parallel num_threads(workers)
    {
      std::vector<std::uint16_t> match(n2), same(n2);
      std::vector<double> out(n2);
      simd::SuccessorTerms terms = ctx.substitution_terms(v);
      terms.match = match.data();
      terms.same = same.data();
#pragma omp for schedule(static)
      for (std::size_t f = 0; f < frontier; ++f) {
        const VertexId* m = cur.map_row(f);
        const std::uint8_t* used = cur.used_row(f);
        std::fill(match.begin(), match.end(), 0);
        std::fill(same.begin(), same.end(), 0);
        for (const auto& p : priors) {
          const VertexId w = m[p.source];
          if (w != kNoVertex) kern.accumulate_edge_matches(match.data(), same.data(), ctx.row(w), p.label, n2);
        }
        terms.resolved = cur.resolved_row(f);
        kern.successor_costs(out.data(), terms, n2);

        const double parent = cur.ped[f];
        std::size_t o = offsets[f];
        for (std::size_t u = 0; u < n2; ++u) {
          if (used[u]) continue;
          cand_cost[o] = parent + out[u];
          cand_parent[o] = static_cast<std::uint32_t>(f);
          cand_target[o] = static_cast<VertexId>(u);
          ++o;
        }
        cand_cost[o] = parent + deletion;
        cand_parent[o] = static_cast<std::uint32_t>(f);
        cand_target[o] = kNoVertex;
      }
    }

    const auto picked = select_k_smallest_indices(
        std::span<const double>(cand_cost.data(), candidates), cfg.k, workers);

#pragma omp parallel for num_threads(workers) schedule(static)
    for (std::size_t r = 0; r < retained; ++r) {
      const std::size_t c = picked[r];
      const std::size_t f = cand_parent[c];
      const VertexId u = cand_target[c];
      std::copy_n(cur.map_row(f), n1, next.map_row(r));
      std::copy_n(cur.used_row(f), n2, next.used_row(r));
      std::copy_n(cur.resolved_row(f), n2, next.resolved_row(r));
      next.map_row(r)[level] = u;
      next.mapped[r] = cur.mapped[f];
      if (u != kNoVertex) {
        next.used_row(r)[u] = 1;
        kern.accumulate_adjacent(next.resolved_row(r), ctx.row(u), n2);
        ++next.mapped[r];
      }
      next.ped[r] = cand_cost[c];
    }

    if (cfg.level_stats) {
      LevelStats stats;
      stats.level = level;
      stats.frontier_size = frontier;
      stats.candidate_count = candidates;
      stats.retained = retained;
      const auto [lo, hi] = std::minmax_element(next.ped.begin(), next.ped.begin() + static_cast<std::ptrdiff_t>(retained));
      stats.min_ped = *lo;
      stats.max_ped = *hi;
      result.levels.push_back(stats);
    }
    result.expanded_nodes += frontier;
    std::swap(cur, next);

    if (observer) {
      FrontierSnapshot snap{level + 1, false, {}};
      for (std::size_t f = 0; f < cur.size; ++f) snap.nodes.push_back(to_search_node(cur, f, level + 1));
      observer(snap);
    }
  }

  // Trailing insertions decide the final ranking of the leaves.
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> final_cost(cur.size);
  for (std::size_t f = 0; f < cur.size; ++f) {
    final_cost[f] = cur.ped[f] + ctx.insertion_cost(n2 - cur.mapped[f], inner_edges(cur, f));
    if (final_cost[f] < best_cost) {
      best_cost = final_cost[f];
      best = f;
    }
  }

  auto leaf_path = [&](std::size_t f) {
    EditPath path;
    const VertexId* m = cur.map_row(f);
    const std::uint8_t* used = cur.used_row(f);
    for (std::size_t i = 0; i < n1; ++i) {
      const auto src = static_cast<VertexId>(i);
      path.ops.push_back(m[i] == kNoVertex ? EditOp::remove(src) : EditOp::substitute(src, m[i]));
    }
    for (std::size_t u = 0; u < n2; ++u) {
      if (!used[u]) path.ops.push_back(EditOp::insert(static_cast<VertexId>(u)));
    }
    path.total_cost = final_cost[f];
    return path;
  };

  if (observer) {
    FrontierSnapshot snap{n1, true, {}};
    for (std::size_t f = 0; f < cur.size; ++f) {
      SearchNode node;
      node.path = leaf_path(f);
      node.next_source = static_cast<VertexId>(n1);
      node.target_used.assign(n2, true);
      node.ped = final_cost[f];
      snap.nodes.push_back(std::move(node));
    }
    observer(snap);
  }

  result.path = leaf_path(best);
  result.distance = best_cost;
  return result;
}

}  // namespace ged
