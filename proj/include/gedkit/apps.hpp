#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gedkit/cost_model.hpp"
#include "gedkit/exact.hpp"
#include "gedkit/io.hpp"
#include "gedkit/kbest.hpp"

namespace ged {

// How a single pair is solved.
struct SolveOptions {
  std::size_t k = 700000;
  CostModel cost_model;
  bool exact = false;
  OracleConfig oracle;
  // Workers for a single engine run. Pair-parallel drivers run one worker
  // per pair and use `threads` across pairs instead.
  unsigned threads = 1;
};

GedResult solve_pair(const LabeledGraph& g1, const LabeledGraph& g2, const SolveOptions& opt);

using Progress = std::function<void(std::size_t done, std::size_t total)>;

struct DistanceMatrix {
  std::vector<std::string> names;
  // Row-major names.size()^2, mirrored; nullopt where the pair failed.
  std::vector<std::optional<double>> values;
  std::vector<std::string> errors;
  std::size_t pairs_computed = 0;

  const std::optional<double>& at(std::size_t i, std::size_t j) const {
    return values[i * names.size() + j];
  }
  // Mean over the computed unordered pairs.
  double mean_distance() const;
  // Header row of names, then one numeric row per graph; failed cells empty.
  std::string to_csv() const;
};

// Each unordered pair is solved once and mirrored; the diagonal is zero.
DistanceMatrix distance_matrix(const std::vector<LabeledGraph>& graphs, const SolveOptions& opt,
                               const Progress& progress = {});

struct KnnPrediction {
  std::string graph;
  std::string truth;
  std::string predicted;
  double nearest_distance = 0.0;
};

struct KnnReport {
  std::vector<KnnPrediction> predictions;
  std::vector<std::string> classes;                // sorted
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
  std::size_t correct = 0;

  double accuracy() const {
    return predictions.empty() ? 0.0
                               : static_cast<double>(correct) / static_cast<double>(predictions.size());
  }
};

// Majority vote among the `neighbors` nearest training graphs. Neighbours
// are ranked by distance, then training order. Vote ties go to the class
// with the smaller mean distance, then the lexicographically smaller class.
// Throws ValidationError when either dataset lacks classes.
KnnReport knn_classify(const Dataset& train, const Dataset& test, std::size_t neighbors,
                       const SolveOptions& opt, const Progress& progress = {});

struct CrossoverResult {
  LabeledGraph offspring;
  EditPath path;                 // g1 -> g2 witness
  std::size_t applied_ops = 0;   // ceil(fraction * |ops|)
  double parent_distance = 0.0;  // d(g1, g2)
  double distance_from_g1 = 0.0;
  double distance_to_g2 = 0.0;
  // Replaying the remaining ops on the offspring reconstructs g2.
  bool continuation_ok = false;
  std::vector<VertexId> offspring_origin;  // g2 counterpart or kNoVertex
};

// Throws InvalidArgument unless 0 <= fraction <= 1.
CrossoverResult crossover(const LabeledGraph& g1, const LabeledGraph& g2, double fraction,
                          const SolveOptions& opt);

std::size_t crossover_prefix(std::size_t ops, double fraction);

}  // namespace ged
