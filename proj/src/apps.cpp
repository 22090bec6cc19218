#include "gedkit/apps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "gedkit/errors.hpp"

namespace ged {

GedResult solve_pair(const LabeledGraph& g1, const LabeledGraph& g2, const SolveOptions& opt) {
  if (opt.exact) return exact_ged(g1, g2, opt.cost_model, opt.oracle);
  EngineConfig cfg;
  cfg.k = opt.k;
  cfg.cost_model = opt.cost_model;
  cfg.worker_count = std::max(1u, opt.threads);
  cfg.level_stats = false;
  return ged_kbest(g1, g2, cfg);
}

namespace {

std::string graph_name(const LabeledGraph& g, std::size_t index) {
  return g.name() ? *g.name() : "graph_" + std::to_string(index);
}

SolveOptions single_worker(SolveOptions opt) {
  opt.threads = 1;
  return opt;
}

std::string format_cost(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

double DistanceMatrix::mean_distance() const {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (const auto& d = at(i, j)) {
        sum += *d;
        ++count;
      }
    }
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

std::string DistanceMatrix::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (j) os << ',';
      if (const auto& d = at(i, j)) os << format_cost(*d);
    }
    os << '\n';
  }
  return os.str();
}

DistanceMatrix distance_matrix(const std::vector<LabeledGraph>& graphs, const SolveOptions& opt,
                               const Progress& progress) {
  const std::size_t n = graphs.size();
  DistanceMatrix m;
  for (std::size_t i = 0; i < n; ++i) m.names.push_back(graph_name(graphs[i], i));
  m.values.assign(n * n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) m.values[i * n + i] = 0.0;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::string> errors(pairs.size());
  const auto inner = single_worker(opt);
  std::size_t done = 0;
#pragma omp parallel for num_threads(std::max(1u, opt.threads)) schedule(dynamic)
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    try {
      const double d = solve_pair(graphs[i], graphs[j], inner).distance;
      m.values[i * n + j] = d;
      m.values[j * n + i] = d;
    } catch (const BudgetExceeded& e) {
      errors[p] = m.names[i] + "," + m.names[j] + ": " + e.what();
    } catch (const Error& e) {
      errors[p] = m.names[i] + "," + m.names[j] + ": " + e.what();
    }
    if (progress) {
#pragma omp critical(gedkit_progress)
      progress(++done, pairs.size());
    }
  }
  for (auto& e : errors) {
    if (!e.empty()) m.errors.push_back(std::move(e));
  }
  m.pairs_computed = pairs.size() - m.errors.size();
  return m;
}

KnnReport knn_classify(const Dataset& train, const Dataset& test, std::size_t neighbors,
                       const SolveOptions& opt, const Progress& progress) {
  if (!train.classes || !test.classes) {
    throw ValidationError("KNN needs class labels for both training and test graphs");
  }
  if (neighbors == 0) throw InvalidArgument("number of neighbours must be at least 1");
  if (train.graphs.empty()) throw ValidationError("training set is empty");

  const std::size_t nt = test.graphs.size();
  const std::size_t nr = train.graphs.size();
  std::vector<std::string> train_class(nr);
  for (std::size_t r = 0; r < nr; ++r) train_class[r] = train.class_of(*train.graphs[r].name());

  std::vector<double> dist(nt * nr, 0.0);
  const auto inner = single_worker(opt);
  std::size_t done = 0;
#pragma omp parallel for num_threads(std::max(1u, opt.threads)) schedule(dynamic)
  for (std::size_t p = 0; p < nt * nr; ++p) {
    dist[p] = solve_pair(test.graphs[p / nr], train.graphs[p % nr], inner).distance;
    if (progress) {
#pragma omp critical(gedkit_progress)
      progress(++done, nt * nr);
    }
  }

  KnnReport report;
  std::map<std::string, std::size_t> class_index;
  for (const auto& c : train_class) class_index.emplace(c, 0);
  for (const auto& g : test.graphs) class_index.emplace(test.class_of(*g.name()), 0);
  for (auto& [name, idx] : class_index) {
    idx = report.classes.size();
    report.classes.push_back(name);
  }
  report.confusion.assign(report.classes.size(), std::vector<std::size_t>(report.classes.size(), 0));

  const std::size_t take = std::min(neighbors, nr);
  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<std::size_t> order(nr);
    for (std::size_t r = 0; r < nr; ++r) order[r] = r;
    const double* row = dist.data() + t * nr;
    std::stable_sort(order.begin(), order.end(),
                     [row](std::size_t a, std::size_t b) { return row[a] < row[b]; });

    struct Vote {
      std::size_t count = 0;
      double sum = 0.0;
    };
    std::map<std::string, Vote> votes;
    for (std::size_t i = 0; i < take; ++i) {
      auto& v = votes[train_class[order[i]]];
      ++v.count;
      v.sum += row[order[i]];
    }
    const std::string* winner = nullptr;
    const Vote* best = nullptr;
    for (const auto& [cls, v] : votes) {  // map order = lexicographic tie-break
      if (best == nullptr || v.count > best->count ||
          (v.count == best->count && v.sum / static_cast<double>(v.count) <
                                         best->sum / static_cast<double>(best->count) - kCostTolerance)) {
        winner = &cls;
        best = &v;
      }
    }

    KnnPrediction pred;
    pred.graph = *test.graphs[t].name();
    pred.truth = test.class_of(pred.graph);
    pred.predicted = *winner;
    pred.nearest_distance = row[order[0]];
    if (pred.truth == pred.predicted) ++report.correct;
    ++report.confusion[class_index[pred.truth]][class_index[pred.predicted]];
    report.predictions.push_back(std::move(pred));
  }
  return report;
}

std::size_t crossover_prefix(std::size_t ops, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("crossover fraction must lie in [0, 1]");
  }
  const double scaled = fraction * static_cast<double>(ops);
  // Round-off such as 0.3 * 10 = 3.0000000000000004 must not bump the prefix.
  const auto prefix = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
  return std::min(prefix, ops);
}

CrossoverResult crossover(const LabeledGraph& g1, const LabeledGraph& g2, double fraction,
                          const SolveOptions& opt) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("crossover fraction must lie in [0, 1]");
  }
  CrossoverResult out;
  const auto parent = solve_pair(g1, g2, opt);
  out.path = parent.path;
  out.parent_distance = parent.distance;
  out.applied_ops = crossover_prefix(out.path.ops.size(), fraction);

  auto applied = apply_edit_path_tracked(g1, out.path, g2, out.applied_ops);
  out.offspring = applied.graph;
  out.offspring_origin = applied.target_of;

  const auto rest = continuation_path(g1, out.path, g2, out.applied_ops, opt.cost_model);
  const auto rebuilt = apply_edit_path_tracked(out.offspring, rest, g2, rest.ops.size());
  out.continuation_ok = resolve_path(rest, out.offspring, g2).complete() &&
                        graphs_equal_under_mapping(rebuilt.graph, g2, rebuilt.target_of);

  out.distance_from_g1 = solve_pair(g1, out.offspring, opt).distance;
  out.distance_to_g2 = solve_pair(out.offspring, g2, opt).distance;
  return out;
}

}  // namespace ged
