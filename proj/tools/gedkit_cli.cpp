#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gedkit/apps.hpp"
#include "gedkit/bench.hpp"
#include "gedkit/errors.hpp"
#include "gedkit/exact.hpp"
#include "gedkit/io.hpp"
#include "gedkit/kbest.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kInput = 2, kCapacity = 3, kVerifyFailed = 4 };

// Largest graph --exact accepts without --force-exact.
constexpr std::size_t kExactGuard = 12;

struct Common {
  std::size_t k = 700000;
  std::string costs = "default";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 1;
  std::string format = "text";
  bool progress = isatty(STDERR_FILENO) != 0;
};

void add_common(CLI::App* app, Common& c, const std::string& default_format) {
  c.format = default_format;
  app->add_option("--k", c.k, "frontier size per level")->check(CLI::PositiveNumber);
  app->add_option("--costs", c.costs,
                  "vsub,vdel,vins,esub,edel,eins or a preset (default, uniform, setting2)");
  app->add_option("--threads", c.threads, "total worker threads")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app->add_flag("--progress,!--no-progress", c.progress, "progress on stderr");
}

ged::Progress progress_printer(const Common& c, const char* what) {
  if (!c.progress) return {};
  return [what](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\r%s %zu/%zu", what, done, total);
    if (done == total) std::fputc('\n', stderr);
    std::fflush(stderr);
  };
}

ged::SolveOptions solve_options(const Common& c) {
  ged::SolveOptions o;
  o.k = c.k;
  o.cost_model = ged::CostModel::parse(c.costs);
  o.threads = c.threads;
  return o;
}

std::vector<ged::Label> split_labels(const std::string& s) {
  std::vector<ged::Label> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ged::Label{item});
  return out;
}

template <class T>
std::vector<T> split_numbers(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_floating_point_v<T>) {
        out.push_back(std::stod(item, &used));
      } else {
        out.push_back(static_cast<T>(std::stoull(item, &used)));
      }
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ged::InvalidArgument("not a number list: " + s);
    }
  }
  if (out.empty()) throw ged::InvalidArgument("empty number list");
  return out;
}

ordered_json path_json(const ged::EditPath& p) {
  ordered_json ops = ordered_json::array();
  for (const auto& op : p.ops) ops.push_back(ged::to_string(op));
  return ops;
}

// --- ged ---------------------------------------------------------------

struct GedArgs {
  Common c;
  std::string g1, g2;
  bool path = false, exact = false, verify = false, force_exact = false;
  std::size_t node_limit = 200'000'000;
};

int run_ged(const GedArgs& a) {
  const auto g1 = ged::read_graph_file(a.g1);
  const auto g2 = ged::read_graph_file(a.g2);
  auto opt = solve_options(a.c);
  if (a.exact) {
    const auto largest = std::max(g1.num_vertices(), g2.num_vertices());
    if (largest > kExactGuard && !a.force_exact) {
      std::cerr << "error: --exact is limited to graphs of at most " << kExactGuard
                << " vertices (largest input has " << largest
                << "). Drop --exact to use the K-Best engine, or pass --force-exact"
                   " together with --node-limit to run the oracle anyway.\n";
      return kCapacity;
    }
    opt.exact = true;
    opt.oracle.node_limit = a.node_limit;
  }
  const auto start = std::chrono::steady_clock::now();
  const auto res = ged::solve_pair(g1, g2, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::optional<ged::WitnessCheck> check;
  if (a.verify) check = ged::verify_witness(res.path, res.distance, g1, g2, opt.cost_model);

  if (a.c.format == "json") {
    ordered_json j;
    j["g1"] = a.g1;
    j["g2"] = a.g2;
    j["method"] = a.exact ? "exact" : "kbest";
    if (!a.exact) j["k"] = a.c.k;
    j["costs"] = opt.cost_model.to_string();
    j["distance"] = res.distance;
    j["optimal"] = res.optimal;
    j["seconds"] = secs;
    if (a.path) j["path"] = path_json(res.path);
    if (check) {
      j["verify"] = {{"ok", check->ok()},
                     {"cost_matches", check->cost_matches},
                     {"complete", check->complete},
                     {"reconstructs_target", check->reconstructs_target},
                     {"recomputed_cost", check->recomputed_cost}};
    }
    std::cout << j.dump(1) << '\n';
  } else {
    std::cout << "distance " << res.distance << (res.optimal ? " (optimal)" : "") << '\n';
    std::cout << "time " << secs << "s\n";
    if (a.path) {
      std::cout << "path (" << res.path.ops.size() << " ops)\n";
      for (const auto& op : res.path.ops) std::cout << "  " << ged::to_string(op) << '\n';
    }
    if (check) {
      std::cout << "verify " << (check->ok() ? "ok" : "FAILED") << " recomputed "
                << check->recomputed_cost << (check->complete ? "" : " incomplete")
                << (check->reconstructs_target ? "" : " no-reconstruction") << '\n';
    }
  }
  return check && !check->ok() ? kVerifyFailed : kOk;
}

// --- matrix ------------------------------------------------------------

struct MatrixArgs {
  Common c;
  std::string dir;
};

void report_load_failures(const ged::Dataset& ds) {
  for (const auto& f : ds.failures) std::cerr << "warning: " << f.file.string() << ": " << f.message << '\n';
}

int run_matrix(const MatrixArgs& a) {
  const auto ds = ged::load_dataset(a.dir, std::nullopt, a.c.threads);
  report_load_failures(ds);
  if (ds.graphs.size() < 2) throw ged::ValidationError("dataset needs at least 2 graphs: " + a.dir);
  const auto m = ged::distance_matrix(ds.graphs, solve_options(a.c), progress_printer(a.c, "pairs"));
  for (const auto& e : m.errors) std::cerr << "pair failed: " << e << '\n';

  if (a.c.format == "json") {
    ordered_json j;
    j["names"] = m.names;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.names.size(); ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t jx = 0; jx < m.names.size(); ++jx) {
        const auto& v = m.at(i, jx);
        row.push_back(v ? ordered_json(*v) : ordered_json(nullptr));
      }
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    j["pairs"] = m.pairs_computed;
    j["mean_distance"] = m.mean_distance();
    j["errors"] = m.errors;
    std::cout << j.dump(1) << '\n';
  } else {
    std::cout << m.to_csv();
    std::cerr << "pairs " << m.pairs_computed << " mean distance " << m.mean_distance() << '\n';
  }
  return kOk;
}

// --- knn ---------------------------------------------------------------

struct KnnArgs {
  Common c;
  std::string train, test, train_classes, test_classes;
  std::size_t neighbors = 1;
};

std::optional<fs::path> class_file_for(const std::string& dir, const std::string& given) {
  if (!given.empty()) return fs::path(given);
  const auto guess = fs::path(dir) / "classes.csv";
  if (fs::exists(guess)) return guess;
  return std::nullopt;
}

int run_knn(const KnnArgs& a) {
  const auto train = ged::load_dataset(a.train, class_file_for(a.train, a.train_classes), a.c.threads);
  const auto test = ged::load_dataset(a.test, class_file_for(a.test, a.test_classes), a.c.threads);
  report_load_failures(train);
  report_load_failures(test);
  const auto r = ged::knn_classify(train, test, a.neighbors, solve_options(a.c),
                                   progress_printer(a.c, "distances"));
  if (a.c.format == "json") {
    ordered_json j;
    j["accuracy"] = r.accuracy();
    j["correct"] = r.correct;
    j["total"] = r.predictions.size();
    j["classes"] = r.classes;
    j["confusion"] = r.confusion;
    ordered_json preds = ordered_json::array();
    for (const auto& p : r.predictions) {
      preds.push_back({{"graph", p.graph},
                       {"truth", p.truth},
                       {"predicted", p.predicted},
                       {"nearest_distance", p.nearest_distance}});
    }
    j["predictions"] = std::move(preds);
    std::cout << j.dump(1) << '\n';
  } else {
    std::cout << "accuracy " << r.accuracy() << " (" << r.correct << '/' << r.predictions.size() << ")\n";
    std::cout << "confusion (rows truth, columns predicted)\n";
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
      std::cout << "  " << r.classes[i];
      for (auto v : r.confusion[i]) std::cout << ' ' << v;
      std::cout << '\n';
    }
  }
  return kOk;
}

// --- crossover ---------------------------------------------------------

struct CrossoverArgs {
  Common c;
  std::string g1, g2, out;
  double fraction = 0.5;
};

int run_crossover(const CrossoverArgs& a) {
  const auto g1 = ged::read_graph_file(a.g1);
  const auto g2 = ged::read_graph_file(a.g2);
  const auto r = ged::crossover(g1, g2, a.fraction, solve_options(a.c));
  auto& summary = a.out.empty() ? std::cerr : std::cout;
  if (a.out.empty()) {
    std::cout << ged::emit_json_graph(r.offspring);
  } else {
    ged::write_graph_file(a.out, r.offspring);
  }
  if (a.c.format == "json") {
    ordered_json j;
    j["ops"] = r.path.ops.size();
    j["applied_ops"] = r.applied_ops;
    j["parent_distance"] = r.parent_distance;
    j["distance_from_g1"] = r.distance_from_g1;
    j["distance_to_g2"] = r.distance_to_g2;
    j["continuation_ok"] = r.continuation_ok;
    summary << j.dump(1) << '\n';
  } else {
    summary << "applied " << r.applied_ops << '/' << r.path.ops.size() << " ops\n"
            << "d(g1, g2) " << r.parent_distance << '\n'
            << "d(g1, offspring) " << r.distance_from_g1 << '\n'
            << "d(offspring, g2) " << r.distance_to_g2 << '\n'
            << "continuation " << (r.continuation_ok ? "ok" : "FAILED") << '\n';
  }
  return r.continuation_ok ? kOk : kVerifyFailed;
}

// --- gen ---------------------------------------------------------------

struct GenArgs {
  Common c;
  std::size_t n = 10, count = 1;
  double density = 0.5;
  std::string vertex_labels = "A,B,C,D", edge_labels = "1", out, prefix = "g";
};

int run_gen(const GenArgs& a) {
  ged::GenSpec spec;
  spec.n = a.n;
  spec.density = a.density;
  spec.vertex_alphabet = split_labels(a.vertex_labels);
  spec.edge_alphabet = split_labels(a.edge_labels);
  spec.validate();
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw ged::IoError("cannot create " + a.out + ": " + ec.message());
  const int width = std::max<int>(4, static_cast<int>(std::to_string(a.count).size()));
  for (std::size_t i = 0; i < a.count; ++i) {
    spec.seed = a.c.seed + i;
    char stem[64];
    std::snprintf(stem, sizeof stem, "%s%0*zu", a.prefix.c_str(), width, i);
    const auto g = ged::generate_random(spec).with_name(stem);
    const auto file = fs::path(a.out) / (std::string(stem) + ".json");
    ged::write_graph_file(file, g);
    std::cout << file.string() << ' ' << spec.seed << ' ' << g.num_vertices() << ' ' << g.num_edges()
              << '\n';
  }
  return kOk;
}

// --- bench -------------------------------------------------------------

struct BenchArgs {
  Common c;
  std::string protocol;
  std::optional<std::size_t> n, pairs, k;
  std::optional<double> density;
  std::string densities, ks, sizes, vertex_labels = "A,B,C,D", edge_labels = "1", out;
  std::size_t node_limit = 200'000'000;
  bool timing = false;
  bool verify = false;
};

int run_bench(BenchArgs a) {
  const auto cm = ged::CostModel::parse(a.c.costs);
  const auto va = split_labels(a.vertex_labels);
  const auto ea = split_labels(a.edge_labels);
  const auto progress = progress_printer(a.c, a.protocol.c_str());
  ged::RunReport rep;
  if (a.protocol == "table1") {
    ged::Table1Config t;
    if (a.n) t.n = *a.n;
    if (a.pairs) t.pairs = *a.pairs;
    if (a.k) t.k = *a.k;
    if (!a.densities.empty()) t.densities = split_numbers<double>(a.densities);
    t.cost_model = cm;
    t.seed = a.c.seed;
    t.vertex_alphabet = va;
    t.edge_alphabet = ea;
    t.node_limit = a.node_limit;
    t.threads = a.c.threads;
    t.verify_witnesses = a.verify;
    rep = ged::run_table1(t, progress);
  } else if (a.protocol == "ksweep") {
    ged::KSweepConfig t;
    if (a.n) t.n = *a.n;
    if (a.pairs) t.pairs = *a.pairs;
    if (a.density) t.density = *a.density;
    if (!a.ks.empty()) t.ks = split_numbers<std::size_t>(a.ks);
    t.cost_model = cm;
    t.seed = a.c.seed;
    t.vertex_alphabet = va;
    t.edge_alphabet = ea;
    t.threads = a.c.threads;
    t.verify_witnesses = a.verify;
    rep = ged::run_ksweep(t, progress);
  } else {
    ged::SizeSweepConfig t;
    if (a.pairs) t.pairs = *a.pairs;
    if (a.k) t.k = *a.k;
    if (a.density) t.density = *a.density;
    if (!a.sizes.empty()) t.sizes = split_numbers<std::size_t>(a.sizes);
    t.cost_model = cm;
    t.seed = a.c.seed;
    t.vertex_alphabet = va;
    t.edge_alphabet = ea;
    t.threads = a.c.threads;
    rep = ged::run_sizesweep(t, progress);
  }
  const auto json = rep.to_json(a.timing);
  if (!a.out.empty()) {
    std::ofstream f(a.out, std::ios::binary);
    if (!(f << json)) throw ged::IoError("cannot write " + a.out);
  }
  std::cout << (a.c.format == "json" ? json : rep.to_text(a.timing));
  for (const auto& r : rep.records) {
    if (r.witness_ok && !*r.witness_ok) {
      std::cerr << "witness check failed for " << r.g1 << "," << r.g2 << '\n';
      return kVerifyFailed;
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gedkit: graph edit distance by level-wise K-Best search"};
  app.require_subcommand(1);

  GedArgs ged_args;
  auto* ged_cmd = app.add_subcommand("ged", "edit distance between two graphs");
  add_common(ged_cmd, ged_args.c, "text");
  ged_cmd->add_option("g1", ged_args.g1, "source graph (.json or .gxl)")->required();
  ged_cmd->add_option("g2", ged_args.g2, "target graph (.json or .gxl)")->required();
  ged_cmd->add_flag("--path", ged_args.path, "print the witness edit path");
  ged_cmd->add_flag("--exact", ged_args.exact, "run the exact branch-and-bound oracle");
  ged_cmd->add_flag("--verify", ged_args.verify, "re-check the witness");
  ged_cmd->add_flag("--force-exact", ged_args.force_exact, "run --exact past the size guard");
  ged_cmd->add_option("--node-limit", ged_args.node_limit, "oracle node budget")->check(CLI::PositiveNumber);

  MatrixArgs matrix_args;
  auto* matrix_cmd = app.add_subcommand("matrix", "distance matrix over a dataset directory");
  add_common(matrix_cmd, matrix_args.c, "csv");
  matrix_cmd->add_option("dir", matrix_args.dir, "dataset directory")->required();

  KnnArgs knn_args;
  auto* knn_cmd = app.add_subcommand("knn", "k-nearest-neighbour classification");
  add_common(knn_cmd, knn_args.c, "text");
  knn_cmd->add_option("train", knn_args.train, "training dataset directory")->required();
  knn_cmd->add_option("test", knn_args.test, "test dataset directory")->required();
  knn_cmd->add_option("--train-classes", knn_args.train_classes, "name,class file (default train/classes.csv)");
  knn_cmd->add_option("--test-classes", knn_args.test_classes, "name,class file (default test/classes.csv)");
  knn_cmd->add_option("--neighbors", knn_args.neighbors, "number of neighbours")->check(CLI::PositiveNumber);

  CrossoverArgs cross_args;
  auto* cross_cmd = app.add_subcommand("crossover", "offspring from a partial edit path");
  add_common(cross_cmd, cross_args.c, "text");
  cross_cmd->add_option("g1", cross_args.g1)->required();
  cross_cmd->add_option("g2", cross_args.g2)->required();
  cross_cmd->add_option("--fraction", cross_args.fraction, "share of ops applied, in [0, 1]");
  cross_cmd->add_option("-o,--out", cross_args.out, "offspring file (default stdout)");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "write seeded random graphs");
  add_common(gen_cmd, gen_args.c, "text");
  gen_cmd->add_option("--n", gen_args.n, "vertices per graph");
  gen_cmd->add_option("--density", gen_args.density, "edge probability");
  gen_cmd->add_option("--count", gen_args.count, "number of graphs");
  gen_cmd->add_option("--vertex-labels", gen_args.vertex_labels, "comma-separated vertex alphabet");
  gen_cmd->add_option("--edge-labels", gen_args.edge_labels, "comma-separated edge alphabet");
  gen_cmd->add_option("--prefix", gen_args.prefix, "file name prefix");
  gen_cmd->add_option("--out", gen_args.out, "output directory")->required();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "experiment harnesses");
  add_common(bench_cmd, bench_args.c, "text");
  bench_cmd->add_option("protocol", bench_args.protocol)
      ->required()
      ->check(CLI::IsMember({"table1", "ksweep", "sizesweep"}));
  bench_cmd->add_option("--n", bench_args.n, "vertices per graph");
  bench_cmd->add_option("--pairs", bench_args.pairs, "pairs per group");
  bench_cmd->add_option("--density", bench_args.density, "edge probability (ksweep, sizesweep)");
  bench_cmd->add_option("--densities", bench_args.densities, "table1 densities, comma-separated");
  bench_cmd->add_option("--ks", bench_args.ks, "ksweep K values, comma-separated");
  bench_cmd->add_option("--sizes", bench_args.sizes, "sizesweep n values, comma-separated");
  bench_cmd->add_option("--vertex-labels", bench_args.vertex_labels, "comma-separated vertex alphabet");
  bench_cmd->add_option("--edge-labels", bench_args.edge_labels, "comma-separated edge alphabet");
  bench_cmd->add_option("--node-limit", bench_args.node_limit, "oracle node budget per pair");
  bench_cmd->add_flag("--timing", bench_args.timing, "include wall times in the JSON report");
  bench_cmd->add_flag("--verify", bench_args.verify, "re-check every witness (table1, ksweep)");
  bench_cmd->add_option("--out", bench_args.out, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*ged_cmd) return run_ged(ged_args);
    if (*matrix_cmd) return run_matrix(matrix_args);
    if (*knn_cmd) return run_knn(knn_args);
    if (*cross_cmd) return run_crossover(cross_args);
    if (*gen_cmd) return run_gen(gen_args);
    if (*bench_cmd) {
      // Each protocol has its own K default; only an explicit --k overrides it.
      if (bench_cmd->get_option("--k")->count() > 0) bench_args.k = bench_args.c.k;
      return run_bench(bench_args);
    }
  } catch (const ged::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ged::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapacity;
  } catch (const ged::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << " (best found " << e.incumbent().distance << ")\n";
    return kCapacity;
  } catch (const ged::TooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapacity;
  } catch (const ged::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kUsage;
}
