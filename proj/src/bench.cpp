#include "gedkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "gedkit/errors.hpp"
#include "gedkit/exact.hpp"
#include "json.hpp"

namespace ged {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : ",") + fmt(x, 12);
  return out;
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (auto x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

std::string join(const std::vector<Label>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ",") + x.value;
  return out;
}

GenSpec shape(std::size_t n, double density, const std::vector<Label>& va,
              const std::vector<Label>& ea) {
  GenSpec s;
  s.n = n;
  s.density = density;
  s.vertex_alphabet = va;
  s.edge_alphabet = ea;
  s.validate();
  return s;
}

void tick(const Progress& progress, std::size_t& done, std::size_t total) {
  if (!progress) return;
#pragma omp critical(gedkit_bench_progress)
  progress(++done, total);
}

EngineConfig engine(std::size_t k, const CostModel& cm, unsigned workers) {
  EngineConfig e;
  e.k = k;
  e.cost_model = cm;
  e.worker_count = std::max(1u, workers);
  e.level_stats = false;
  return e;
}

}  // namespace

std::vector<BenchAggregate> aggregate_records(const std::vector<BenchRecord>& records) {
  std::vector<BenchAggregate> out;
  std::vector<double> exact_sum;
  std::vector<double> normalized_sum;
  std::vector<std::size_t> normalized_count;
  std::vector<std::size_t> exact_count;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& a) { return a.param == r.param; });
    if (it == out.end()) {
      out.push_back({});
      out.back().param = r.param;
      exact_sum.push_back(0.0);
      exact_count.push_back(0);
      normalized_sum.push_back(0.0);
      normalized_count.push_back(0);
      it = out.end() - 1;
    }
    const auto g = static_cast<std::size_t>(it - out.begin());
    auto& a = *it;
    ++a.pairs;
    a.seconds += r.seconds;
    if (r.excluded || !r.distance) {
      ++a.excluded;
      continue;
    }
    a.mean_distance += *r.distance;
    if (r.exact) {
      exact_sum[g] += *r.exact;
      ++exact_count[g];
    }
    if (r.optimal) a.optimal_matches = a.optimal_matches.value_or(0) + (*r.optimal ? 1 : 0);
    if (r.normalized) {
      normalized_sum[g] += *r.normalized;
      ++normalized_count[g];
    }
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    auto& a = out[g];
    const std::size_t used = a.pairs - a.excluded;
    if (used == 0) continue;
    a.mean_distance /= static_cast<double>(used);
    if (exact_count[g] > 0) {
      a.mean_exact = exact_sum[g] / static_cast<double>(exact_count[g]);
      a.deviation_pct = *a.mean_exact > 0.0
                            ? (a.mean_distance - *a.mean_exact) / *a.mean_exact * 100.0
                            : 0.0;
    }
    if (a.optimal_matches) {
      a.optimal_rate = static_cast<double>(*a.optimal_matches) / static_cast<double>(used);
    }
    if (normalized_count[g] > 0) {
      a.mean_normalized = normalized_sum[g] / static_cast<double>(normalized_count[g]);
    }
  }
  return out;
}

std::string RunReport::to_json(bool timing) const {
  using nlohmann::ordered_json;
  timing = timing || protocol == "sizesweep";
  ordered_json j;
  j["protocol"] = protocol;
  ordered_json c = ordered_json::object();
  for (const auto& [k, v] : config) c[k] = v;
  j["config"] = c;
  ordered_json recs = ordered_json::array();
  for (const auto& r : records) {
    ordered_json o;
    o["param"] = r.param;
    o["g1"] = r.g1;
    o["g2"] = r.g2;
    o["distance"] = r.distance ? ordered_json(*r.distance) : ordered_json(nullptr);
    if (r.exact) o["exact"] = *r.exact;
    if (r.optimal) o["optimal"] = *r.optimal;
    if (r.normalized) o["normalized"] = *r.normalized;
    o["excluded"] = r.excluded;
    if (r.witness_ok) o["witness_ok"] = *r.witness_ok;
    if (timing) o["seconds"] = r.seconds;
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  ordered_json aggs = ordered_json::array();
  for (const auto& a : aggregates) {
    ordered_json o;
    o["param"] = a.param;
    o["pairs"] = a.pairs;
    o["excluded"] = a.excluded;
    o["mean_distance"] = a.mean_distance;
    if (a.mean_exact) o["mean_exact"] = *a.mean_exact;
    if (a.deviation_pct) o["deviation_pct"] = *a.deviation_pct;
    if (a.optimal_matches) o["optimal_matches"] = *a.optimal_matches;
    if (a.optimal_rate) o["optimal_rate"] = *a.optimal_rate;
    if (a.mean_normalized) o["mean_normalized"] = *a.mean_normalized;
    if (timing) o["seconds"] = a.seconds;
    aggs.push_back(std::move(o));
  }
  j["aggregates"] = std::move(aggs);
  if (timing) j["total_seconds"] = total_seconds;
  return j.dump(1) + "\n";
}

std::string RunReport::to_text(bool timing) const {
  timing = timing || protocol == "sizesweep";
  const char* key = protocol == "table1" ? "density" : protocol == "ksweep" ? "K" : "n";
  std::ostringstream os;
  os << protocol << '\n';
  for (const auto& a : aggregates) {
    os << "  " << key << '=' << fmt(a.param) << "  pairs=" << a.pairs;
    if (a.excluded) os << " (excluded " << a.excluded << ')';
    os << "  mean=" << fmt(a.mean_distance);
    if (a.mean_exact) os << "  exact=" << fmt(*a.mean_exact);
    if (a.deviation_pct) os << "  deviation=" << fmt(*a.deviation_pct, 4) << '%';
    if (a.optimal_matches) {
      os << "  optimal=" << *a.optimal_matches << '/' << (a.pairs - a.excluded);
    }
    if (a.mean_normalized) os << "  normalized=" << fmt(*a.mean_normalized);
    if (timing) os << "  time=" << fmt(a.seconds, 4) << 's';
    os << '\n';
  }
  if (timing) os << "  total " << fmt(total_seconds, 4) << "s\n";
  return os.str();
}

std::pair<LabeledGraph, LabeledGraph> bench_pair(const GenSpec& spec, std::uint64_t seed,
                                                 std::size_t index, const std::string& prefix) {
  GenSpec s = spec;
  s.seed = seed + 2 * static_cast<std::uint64_t>(index);
  auto a = generate_random(s).with_name(prefix + "_a");
  s.seed += 1;
  auto b = generate_random(s).with_name(prefix + "_b");
  return {std::move(a), std::move(b)};
}

RunReport run_table1(const Table1Config& cfg, const Progress& progress) {
  if (cfg.pairs == 0 || cfg.densities.empty()) throw InvalidArgument("table1 needs pairs and densities");
  cfg.cost_model.validate();
  RunReport rep;
  rep.protocol = "table1";
  rep.config = {{"n", std::to_string(cfg.n)},
                {"densities", join(cfg.densities)},
                {"pairs", std::to_string(cfg.pairs)},
                {"k", std::to_string(cfg.k)},
                {"costs", cfg.cost_model.to_string()},
                {"seed", std::to_string(cfg.seed)},
                {"vertex_alphabet", join(cfg.vertex_alphabet)},
                {"edge_alphabet", join(cfg.edge_alphabet)},
                {"node_limit", std::to_string(cfg.node_limit)},
                {"verify_witnesses", cfg.verify_witnesses ? "true" : "false"}};

  const std::size_t total = cfg.densities.size() * cfg.pairs;
  rep.records.resize(total);
  const auto start = Clock::now();
  std::size_t done = 0;
#pragma omp parallel for num_threads(std::max(1u, cfg.threads)) schedule(dynamic)
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t d = i / cfg.pairs;
    const double density = cfg.densities[d];
    char prefix[64];
    std::snprintf(prefix, sizeof prefix, "d%zu_p%03zu", d, i % cfg.pairs);
    const auto [g1, g2] =
        bench_pair(shape(cfg.n, density, cfg.vertex_alphabet, cfg.edge_alphabet), cfg.seed, i, prefix);
    auto& r = rep.records[i];
    r.param = density;
    r.g1 = *g1.name();
    r.g2 = *g2.name();
    const auto t0 = Clock::now();
    const auto approx = ged_kbest(g1, g2, engine(cfg.k, cfg.cost_model, 1));
    r.distance = approx.distance;
    if (cfg.verify_witnesses) {
      r.witness_ok = verify_witness(approx.path, approx.distance, g1, g2, cfg.cost_model).ok();
    }
    OracleConfig oc;
    oc.node_limit = cfg.node_limit;
    oc.seed_path = approx.path;
    try {
      const auto exact = exact_ged(g1, g2, cfg.cost_model, oc);
      r.exact = exact.distance;
      if (cfg.verify_witnesses) {
        r.witness_ok = *r.witness_ok &&
                       verify_witness(exact.path, exact.distance, g1, g2, cfg.cost_model).ok();
      }
      r.optimal = costs_equal(approx.distance, exact.distance);
    } catch (const BudgetExceeded&) {
      r.excluded = true;
    }
    r.seconds = seconds_since(t0);
    tick(progress, done, total);
  }
  rep.total_seconds = seconds_since(start);
  rep.aggregates = aggregate_records(rep.records);
  return rep;
}

RunReport run_ksweep(const KSweepConfig& cfg, const Progress& progress) {
  if (cfg.pairs == 0 || cfg.ks.empty()) throw InvalidArgument("ksweep needs pairs and K values");
  for (auto k : cfg.ks) {
    if (k == 0) throw InvalidArgument("K values must be positive");
  }
  cfg.cost_model.validate();
  RunReport rep;
  rep.protocol = "ksweep";
  rep.config = {{"n", std::to_string(cfg.n)},
                {"density", fmt(cfg.density, 12)},
                {"pairs", std::to_string(cfg.pairs)},
                {"ks", join(cfg.ks)},
                {"costs", cfg.cost_model.to_string()},
                {"seed", std::to_string(cfg.seed)},
                {"vertex_alphabet", join(cfg.vertex_alphabet)},
                {"edge_alphabet", join(cfg.edge_alphabet)},
                {"verify_witnesses", cfg.verify_witnesses ? "true" : "false"}};

  const std::size_t nk = cfg.ks.size();
  std::vector<BenchRecord> by_pair(cfg.pairs * nk);
  const auto start = Clock::now();
  std::size_t done = 0;
  const auto spec = shape(cfg.n, cfg.density, cfg.vertex_alphabet, cfg.edge_alphabet);
#pragma omp parallel for num_threads(std::max(1u, cfg.threads)) schedule(dynamic)
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "p%03zu", p);
    const auto [g1, g2] = bench_pair(spec, cfg.seed, p, prefix);
    double reference = 0.0;
    for (std::size_t ki = 0; ki < nk; ++ki) {
      auto& r = by_pair[p * nk + ki];
      r.param = static_cast<double>(cfg.ks[ki]);
      r.g1 = *g1.name();
      r.g2 = *g2.name();
      const auto t0 = Clock::now();
      const auto res = ged_kbest(g1, g2, engine(cfg.ks[ki], cfg.cost_model, 1));
      r.seconds = seconds_since(t0);
      r.distance = res.distance;
      if (cfg.verify_witnesses) {
        r.witness_ok = verify_witness(res.path, res.distance, g1, g2, cfg.cost_model).ok();
      }
      if (ki == 0) reference = *r.distance;
      r.normalized = reference > 0.0 ? *r.distance / reference : 1.0;
      tick(progress, done, cfg.pairs * nk);
    }
  }
  rep.total_seconds = seconds_since(start);
  // Report grouped by K.
  for (std::size_t ki = 0; ki < nk; ++ki) {
    for (std::size_t p = 0; p < cfg.pairs; ++p) rep.records.push_back(by_pair[p * nk + ki]);
  }
  rep.aggregates = aggregate_records(rep.records);
  return rep;
}

RunReport run_sizesweep(const SizeSweepConfig& cfg, const Progress& progress) {
  if (cfg.pairs == 0 || cfg.sizes.empty()) throw InvalidArgument("sizesweep needs pairs and sizes");
  cfg.cost_model.validate();
  RunReport rep;
  rep.protocol = "sizesweep";
  rep.config = {{"sizes", join(cfg.sizes)},
                {"density", fmt(cfg.density, 12)},
                {"pairs", std::to_string(cfg.pairs)},
                {"k", std::to_string(cfg.k)},
                {"costs", cfg.cost_model.to_string()},
                {"seed", std::to_string(cfg.seed)},
                {"threads", std::to_string(cfg.threads)}};
  const auto start = Clock::now();
  std::size_t done = 0;
  const std::size_t total = cfg.sizes.size() * cfg.pairs;
  for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
    const auto spec = shape(cfg.sizes[s], cfg.density, cfg.vertex_alphabet, cfg.edge_alphabet);
    for (std::size_t p = 0; p < cfg.pairs; ++p) {
      char prefix[48];
      std::snprintf(prefix, sizeof prefix, "n%zu_p%03zu", cfg.sizes[s], p);
      const auto [g1, g2] = bench_pair(spec, cfg.seed, s * cfg.pairs + p, prefix);
      BenchRecord r;
      r.param = static_cast<double>(cfg.sizes[s]);
      r.g1 = *g1.name();
      r.g2 = *g2.name();
      const auto t0 = Clock::now();
      r.distance = ged_kbest(g1, g2, engine(cfg.k, cfg.cost_model, cfg.threads)).distance;
      r.seconds = seconds_since(t0);
      rep.records.push_back(std::move(r));
      tick(progress, done, total);
    }
  }
  rep.total_seconds = seconds_since(start);
  rep.aggregates = aggregate_records(rep.records);
  return rep;
}

}  // namespace ged
