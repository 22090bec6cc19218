#include "gedkit/exact.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gedkit/errors.hpp"
#include "gedkit/simd/kernels.hpp"
#include "pair_context.hpp"

namespace ged {

void OracleConfig::validate() const {
  if (node_limit == 0) throw InvalidArgument("node_limit must be at least 1");
}

namespace {

std::size_t edges_within_unresolved_g1(const LabeledGraph& g1, VertexId next_source) {
  std::size_t count = 0;
  for (const auto& e : g1.edges()) count += e.u >= next_source;  // u < v
  return count;
}

std::size_t edges_within_unused_g2(const LabeledGraph& g2, const std::vector<bool>& used) {
  std::size_t count = 0;
  for (const auto& e : g2.edges()) count += !used[e.u] && !used[e.v];
  return count;
}

// min over s in [0, min(a, b)] of (a - s) del + (b - s) ins + max(0, s - common) sub.
// The objective is convex and piecewise linear, so a breakpoint is optimal.
double matching_bound(std::size_t a, std::size_t b, std::size_t common, double del, double ins,
                      double sub) {
  const std::size_t top = std::min(a, b);
  auto cost = [&](std::size_t s) {
    const double mismatched = s > common ? static_cast<double>(s - common) : 0.0;
    return static_cast<double>(a - s) * del + static_cast<double>(b - s) * ins + mismatched * sub;
  };
  return std::min({cost(0), cost(std::min(common, top)), cost(top)});
}

// Per-depth tables over g1 and mutable per-branch counters over g2 feeding
// the label-aware bound. Depth d means g1 vertices 0..d-1 are resolved.
class BoundState {
 public:
  explicit BoundState(const detail::PairContext& ctx) : ctx_(ctx) {
    const std::size_t n1 = ctx.n1;
    const std::size_t vl = ctx.vertex_label_count;
    const std::size_t el = ctx.edge_label_count + 1;
    vertex_suffix_.assign((n1 + 1) * vl, 0);
    edge_suffix_.assign((n1 + 1) * el, 0);
    edge_suffix_total_.assign(n1 + 1, 0);
    for (std::size_t d = n1; d-- > 0;) {
      std::copy_n(&vertex_suffix_[(d + 1) * vl], vl, &vertex_suffix_[d * vl]);
      ++vertex_suffix_[d * vl + ctx.vertex_label1[d]];
      std::copy_n(&edge_suffix_[(d + 1) * el], el, &edge_suffix_[d * el]);
      edge_suffix_total_[d] = edge_suffix_total_[d + 1];
    }
    // Edge (u, v), u < v, lies within the suffix starting at d iff d <= u.
    for (std::size_t v = 0; v < n1; ++v) {
      for (const auto& p : ctx.prior[v]) {
        for (std::size_t d = 0; d <= p.source; ++d) {
          ++edge_suffix_[d * el + p.label];
          ++edge_suffix_total_[d];
        }
      }
    }
    // cross_[d * n1 + i]: neighbours of i with index >= d.
    cross_.assign((n1 + 1) * n1, 0);
    for (const auto& e : ctx.g1.edges()) {
      for (std::size_t d = 0; d <= n1; ++d) {
        if (e.u < d && e.v >= d) ++cross_[d * n1 + e.u];
      }
    }
    degree2_.resize(ctx.n2);
    for (std::size_t u = 0; u < ctx.n2; ++u) {
      degree2_[u] = static_cast<std::uint32_t>(ctx.g2.neighbors(static_cast<VertexId>(u)).size());
    }
    vertex_remaining2_.assign(vl, 0);
    for (auto l : ctx.vertex_label2) ++vertex_remaining2_[l];
    edge_remaining2_.assign(el, 0);
    for (const auto& e : ctx.g2.edges()) ++edge_remaining2_[ctx.row(e.u)[e.v]];
    edge_remaining2_total_ = ctx.m2;
  }

  // Marks g2 vertex u as consumed; used must not yet contain u.
  void take(VertexId u, const std::uint8_t* used) {
    --vertex_remaining2_[ctx_.vertex_label2[u]];
    const std::uint16_t* row = ctx_.row(u);
    for (const auto& nb : ctx_.g2.neighbors(u)) {
      if (used[nb.vertex]) continue;
      --edge_remaining2_[row[nb.vertex]];
      --edge_remaining2_total_;
    }
  }

  void give_back(VertexId u, const std::uint8_t* used) {
    ++vertex_remaining2_[ctx_.vertex_label2[u]];
    const std::uint16_t* row = ctx_.row(u);
    for (const auto& nb : ctx_.g2.neighbors(u)) {
      if (used[nb.vertex]) continue;
      ++edge_remaining2_[row[nb.vertex]];
      ++edge_remaining2_total_;
    }
  }

  double bound(std::size_t depth, std::size_t mapped, const VertexId* map,
               const std::uint16_t* resolved) const {
    const auto& cm = ctx_.cm;
    const std::size_t vl = ctx_.vertex_label_count;
    const std::size_t el = ctx_.edge_label_count + 1;

    std::size_t common = 0;
    for (std::size_t l = 0; l < vl; ++l) {
      common += std::min(vertex_suffix_[depth * vl + l], vertex_remaining2_[l]);
    }
    double total = matching_bound(ctx_.n1 - depth, ctx_.n2 - mapped, common, cm.vdel, cm.vins,
                                  cm.vsub);

    std::size_t edge_common = 0;
    for (std::size_t l = 1; l < el; ++l) {
      edge_common += std::min(edge_suffix_[depth * el + l], edge_remaining2_[l]);
    }
    total += matching_bound(edge_suffix_total_[depth], edge_remaining2_total_, edge_common,
                            cm.edel, cm.eins, cm.esub);

    for (std::size_t i = 0; i < depth; ++i) {
      const double out1 = cross_[depth * ctx_.n1 + i];
      const VertexId w = map[i];
      if (w == kNoVertex) {
        total += out1 * cm.edel;
        continue;
      }
      const double out2 = static_cast<double>(degree2_[w]) - static_cast<double>(resolved[w]);
      total += out1 > out2 ? (out1 - out2) * cm.edel : (out2 - out1) * cm.eins;
    }
    return total;
  }

 private:
  const detail::PairContext& ctx_;
  std::vector<std::size_t> vertex_suffix_;
  std::vector<std::size_t> edge_suffix_;
  std::vector<std::size_t> edge_suffix_total_;
  std::vector<std::uint32_t> cross_;
  std::vector<std::uint32_t> degree2_;
  std::vector<std::size_t> vertex_remaining2_;
  std::vector<std::size_t> edge_remaining2_;
  std::size_t edge_remaining2_total_ = 0;
};

class BranchAndBound {
 public:
  BranchAndBound(const detail::PairContext& ctx, const OracleConfig& cfg, double incumbent)
      : ctx_(ctx),
        cfg_(cfg),
        kern_(simd::kernels()),
        bounds_(ctx),
        best_(incumbent),
        map_(ctx.n1, kNoVertex),
        used_(ctx.n2, 0),
        resolved_(ctx.n2, 0),
        match_((ctx.n1 + 1) * ctx.n2),
        same_((ctx.n1 + 1) * ctx.n2),
        out_((ctx.n1 + 1) * ctx.n2) {}

  void run() { descend(0, 0.0, 0); }

  double best() const { return best_; }
  bool improved() const { return !best_map_.empty(); }
  const std::vector<VertexId>& best_map() const { return best_map_; }
  std::size_t expanded() const { return expanded_; }

 private:
  bool beats_incumbent(double lower) const { return lower < best_ - kCostTolerance; }

  void descend(std::size_t depth, double ped, std::size_t mapped) {
    if (++expanded_ > cfg_.node_limit) {
      throw BudgetExceeded("node budget of " + std::to_string(cfg_.node_limit) + " exhausted",
                           GedResult{});
    }
    const std::size_t n2 = ctx_.n2;
    if (depth == ctx_.n1) {
      std::size_t twice_inner = 0;
      for (std::size_t u = 0; u < n2; ++u) {
        if (used_[u]) twice_inner += resolved_[u];
      }
      const double total = ped + ctx_.insertion_cost(n2 - mapped, twice_inner / 2);
      if (beats_incumbent(total)) {
        best_ = total;
        best_map_ = map_;
      }
      return;
    }

    const auto v = static_cast<VertexId>(depth);
    std::uint16_t* match = match_.data() + depth * n2;
    std::uint16_t* same = same_.data() + depth * n2;
    double* out = out_.data() + depth * n2;
    std::fill_n(match, n2, 0);
    std::fill_n(same, n2, 0);
    for (const auto& p : ctx_.prior[v]) {
      const VertexId w = map_[p.source];
      if (w != kNoVertex) kern_.accumulate_edge_matches(match, same, ctx_.row(w), p.label, n2);
    }
    auto terms = ctx_.substitution_terms(v);
    terms.resolved = resolved_.data();
    terms.match = match;
    terms.same = same;
    kern_.successor_costs(out, terms, n2);

    for (std::size_t u = 0; u < n2; ++u) {
      if (used_[u]) continue;
      const double cost = ped + out[u];
      if (!beats_incumbent(cost)) continue;
      const auto target = static_cast<VertexId>(u);
      map_[depth] = target;
      used_[u] = 1;
      bounds_.take(target, used_.data());
      kern_.accumulate_adjacent(resolved_.data(), ctx_.row(target), n2);
      if (!cfg_.use_bound ||
          beats_incumbent(cost + bounds_.bound(depth + 1, mapped + 1, map_.data(), resolved_.data()))) {
        descend(depth + 1, cost, mapped + 1);
      }
      subtract_adjacent(ctx_.row(target));
      used_[u] = 0;
      bounds_.give_back(target, used_.data());
    }

    const double cost = ped + ctx_.deletion_cost(v);
    if (!beats_incumbent(cost)) return;
    map_[depth] = kNoVertex;
    if (!cfg_.use_bound ||
        beats_incumbent(cost + bounds_.bound(depth + 1, mapped, map_.data(), resolved_.data()))) {
      descend(depth + 1, cost, mapped);
    }
  }

  void subtract_adjacent(const std::uint16_t* row) {
    for (std::size_t x = 0; x < ctx_.n2; ++x) resolved_[x] = static_cast<std::uint16_t>(resolved_[x] - (row[x] != 0));
  }

  const detail::PairContext& ctx_;
  const OracleConfig& cfg_;
  const simd::KernelTable& kern_;
  BoundState bounds_;
  double best_;
  std::vector<VertexId> best_map_;
  std::size_t expanded_ = 0;
  std::vector<VertexId> map_;
  std::vector<std::uint8_t> used_;
  std::vector<std::uint16_t> resolved_;
  std::vector<std::uint16_t> match_;
  std::vector<std::uint16_t> same_;
  std::vector<double> out_;
};

EditPath path_from_map(const std::vector<VertexId>& map, std::size_t n2) {
  EditPath path;
  std::vector<bool> used(n2, false);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto v = static_cast<VertexId>(i);
    if (map[i] == kNoVertex) {
      path.ops.push_back(EditOp::remove(v));
    } else {
      path.ops.push_back(EditOp::substitute(v, map[i]));
      used[map[i]] = true;
    }
  }
  for (std::size_t u = 0; u < n2; ++u) {
    if (!used[u]) path.ops.push_back(EditOp::insert(static_cast<VertexId>(u)));
  }
  return path;
}

}  // namespace

GedResult exact_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& cm,
                    const OracleConfig& cfg) {
  cfg.validate();
  const detail::PairContext ctx(g1, g2, cm);

  GedResult seed;
  if (cfg.seed_path) {
    if (!resolve_path(*cfg.seed_path, g1, g2).complete()) {
      throw InvalidPath("seed path for exact_ged must be complete");
    }
    seed.path = *cfg.seed_path;
    seed.distance = path_cost(seed.path, g1, g2, cm);
    seed.path.total_cost = seed.distance;
  } else {
    EngineConfig greedy;
    greedy.k = 1;
    greedy.cost_model = cm;
    greedy.level_stats = false;
    seed = ged_kbest(g1, g2, greedy);
  }
  seed.levels.clear();

  BranchAndBound search(ctx, cfg, seed.distance);
  try {
    search.run();
  } catch (const BudgetExceeded& e) {
    GedResult partial = seed;
    if (search.improved()) {
      partial.path = path_from_map(search.best_map(), ctx.n2);
      partial.distance = search.best();
      partial.path.total_cost = partial.distance;
    }
    partial.optimal = false;
    partial.expanded_nodes = search.expanded();
    throw BudgetExceeded(e.what(), std::move(partial));
  }

  GedResult result = seed;
  if (search.improved()) {
    result.path = path_from_map(search.best_map(), ctx.n2);
    result.distance = search.best();
    result.path.total_cost = result.distance;
  }
  result.optimal = true;
  result.expanded_nodes = search.expanded();
  return result;
}

double lower_bound(const SearchNode& node, const LabeledGraph& g1, const LabeledGraph& g2,
                   const CostModel& cm) {
  const double r1 = static_cast<double>(node.remaining_sources(g1));
  const double r2 = static_cast<double>(node.remaining_targets());
  const double e1 = static_cast<double>(edges_within_unresolved_g1(g1, node.next_source));
  const double e2 = static_cast<double>(edges_within_unused_g2(g2, node.target_used));
  return std::max(0.0, r1 - r2) * cm.vdel + std::max(0.0, r2 - r1) * cm.vins +
         std::max(0.0, e1 - e2) * cm.edel + std::max(0.0, e2 - e1) * cm.eins;
}

double label_lower_bound(const SearchNode& node, const LabeledGraph& g1, const LabeledGraph& g2,
                         const CostModel& cm) {
  const detail::PairContext ctx(g1, g2, cm);
  BoundState state(ctx);
  std::vector<VertexId> map(ctx.n1, kNoVertex);
  std::vector<std::uint8_t> used(ctx.n2, 0);
  std::vector<std::uint16_t> resolved(ctx.n2, 0);
  std::size_t mapped = 0;
  for (const auto& op : node.path.ops) {
    if (op.kind == EditOp::Kind::Insert) {
      throw InvalidState("label_lower_bound expects a node without insertions");
    }
    if (op.kind != EditOp::Kind::Substitute) continue;
    map[op.source] = op.target;
    used[op.target] = 1;
    state.take(op.target, used.data());
    for (std::size_t x = 0; x < ctx.n2; ++x) resolved[x] += ctx.row(op.target)[x] != 0;
    ++mapped;
  }
  return state.bound(node.next_source, mapped, map.data(), resolved.data());
}

GedResult exhaustive_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& cm,
                         std::size_t vertex_limit) {
  const std::size_t n1 = g1.num_vertices();
  const std::size_t n2 = g2.num_vertices();
  if (n1 + n2 > vertex_limit) {
    throw TooLarge("exhaustive enumeration is limited to |V1| + |V2| <= " +
                   std::to_string(vertex_limit) + " (got " + std::to_string(n1 + n2) + ")");
  }
  cm.validate();

  GedResult best;
  best.distance = std::numeric_limits<double>::infinity();
  std::vector<VertexId> map(n1, kNoVertex);
  std::vector<bool> used(n2, false);

  auto visit = [&](auto&& self, std::size_t v) -> void {
    if (v == n1) {
      EditPath path = path_from_map(map, n2);
      const double cost = path_cost(path, g1, g2, cm);
      ++best.expanded_nodes;
      if (cost < best.distance - kCostTolerance) {
        best.distance = cost;
        best.path = std::move(path);
        best.path.total_cost = cost;
      }
      return;
    }
    for (std::size_t u = 0; u < n2; ++u) {
      if (used[u]) continue;
      used[u] = true;
      map[v] = static_cast<VertexId>(u);
      self(self, v + 1);
      used[u] = false;
    }
    map[v] = kNoVertex;
    self(self, v + 1);
  };
  visit(visit, 0);
  best.optimal = true;
  return best;
}

}  // namespace ged
