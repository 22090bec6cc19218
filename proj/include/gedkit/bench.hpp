#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gedkit/apps.hpp"
#include "gedkit/cost_model.hpp"
#include "gedkit/io.hpp"

namespace ged {

// One solved pair. `param` is the group key: density for table1, K for
// ksweep, n for sizesweep.
struct BenchRecord {
  double param = 0.0;
  std::string g1;
  std::string g2;
  std::optional<double> distance;
  std::optional<double> exact;       // oracle distance when the oracle ran
  std::optional<bool> optimal;       // distance == exact
  std::optional<double> normalized;  // ksweep: distance / distance at the first K
  bool excluded = false;             // oracle budget exceeded
  std::optional<bool> witness_ok;    // set when witnesses are verified
  double seconds = 0.0;
};

struct BenchAggregate {
  double param = 0.0;
  std::size_t pairs = 0;     // records in the group
  std::size_t excluded = 0;  // dropped from every statistic below
  double mean_distance = 0.0;
  std::optional<double> mean_exact;
  std::optional<double> deviation_pct;  // (mean_distance - mean_exact) / mean_exact * 100
  std::optional<std::size_t> optimal_matches;
  std::optional<double> optimal_rate;  // optimal_matches / (pairs - excluded)
  std::optional<double> mean_normalized;
  double seconds = 0.0;
};

// Groups records by param in first-appearance order.
std::vector<BenchAggregate> aggregate_records(const std::vector<BenchRecord>& records);

struct RunReport {
  std::string protocol;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<BenchRecord> records;
  std::vector<BenchAggregate> aggregates;
  double total_seconds = 0.0;

  // Wall times are left out unless requested so that reruns compare
  // byte-for-byte. sizesweep always carries them.
  std::string to_json(bool timing = false) const;
  std::string to_text(bool timing = false) const;
};

// Deterministic pair i of a corpus: g1 seeded with seed + 2i, g2 with
// seed + 2i + 1, both drawn from `shape` with its seed replaced.
std::pair<LabeledGraph, LabeledGraph> bench_pair(const GenSpec& shape, std::uint64_t seed,
                                                 std::size_t index, const std::string& prefix);

struct Table1Config {
  std::size_t n = 10;
  std::vector<double> densities{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t pairs = 100;
  std::size_t k = 700000;
  CostModel cost_model;
  std::uint64_t seed = 1;
  std::vector<Label> vertex_alphabet{"A", "B", "C", "D"};
  std::vector<Label> edge_alphabet{"1"};
  std::uint64_t node_limit = 200'000'000;
  unsigned threads = 1;
  // Re-check every returned edit path with verify_witness.
  bool verify_witnesses = false;
};

struct KSweepConfig {
  std::size_t n = 15;
  double density = 0.5;
  std::size_t pairs = 30;
  std::vector<std::size_t> ks{10, 100, 1000, 10000};
  CostModel cost_model;
  std::uint64_t seed = 1;
  std::vector<Label> vertex_alphabet{"A", "B", "C", "D"};
  std::vector<Label> edge_alphabet{"1"};
  unsigned threads = 1;
  bool verify_witnesses = false;
};

struct SizeSweepConfig {
  std::vector<std::size_t> sizes{50, 100, 150, 200};
  double density = 0.4;
  std::size_t k = 5000;
  std::size_t pairs = 1;
  CostModel cost_model;
  std::uint64_t seed = 1;
  std::vector<Label> vertex_alphabet{"A", "B", "C", "D"};
  std::vector<Label> edge_alphabet{"1"};
  unsigned threads = 1;  // engine workers; pairs run one after another
};

// table1: K-Best and the exact oracle on every pair, pairs in parallel.
RunReport run_table1(const Table1Config& cfg, const Progress& progress = {});
// ksweep: the same pairs at every K; normalized per pair by the first K.
RunReport run_ksweep(const KSweepConfig& cfg, const Progress& progress = {});
// sizesweep: wall time of K-Best per n.
RunReport run_sizesweep(const SizeSweepConfig& cfg, const Progress& progress = {});

}  // namespace ged
