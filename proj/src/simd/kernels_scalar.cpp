#include "gedkit/simd/kernels.hpp"

namespace ged::simd {
namespace {

void accumulate_adjacent(std::uint16_t* acc, const std::uint16_t* row, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = static_cast<std::uint16_t>(acc[i] + (row[i] != 0));
}

void accumulate_edge_matches(std::uint16_t* match, std::uint16_t* same, const std::uint16_t* row,
                             std::uint16_t label, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    match[i] = static_cast<std::uint16_t>(match[i] + (row[i] != 0));
    same[i] = static_cast<std::uint16_t>(same[i] + (row[i] == label));
  }
}

void successor_costs(double* out, const SuccessorTerms& t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double edge = t.base + t.eins * static_cast<double>(t.resolved[i]);
    edge = edge + t.match_coef * static_cast<double>(t.match[i]);
    edge = edge + t.same_coef * static_cast<double>(t.same[i]);
    out[i] = t.vertex_cost[i] + edge;
  }
}

std::size_t count_le(const double* values, std::size_t n, double threshold) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += values[i] <= threshold;
  return count;
}

std::size_t count_lt(const double* values, std::size_t n, double threshold) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += values[i] < threshold;
  return count;
}

}  // namespace

namespace detail {
const KernelTable kScalarKernels{
    Isa::Scalar, accumulate_adjacent, accumulate_edge_matches, successor_costs, count_le, count_lt,
};
}  // namespace detail

}  // namespace ged::simd
