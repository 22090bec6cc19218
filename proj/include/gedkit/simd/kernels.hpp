#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops of the search. Every kernel has a scalar
// reference implementation; vector variants must produce bit-identical
// results (same operation order per lane, no FMA contraction).
//
// Edge rows encode a dense adjacency row of g2: 0 means "no edge", any other
// value is the 1-based id of the edge label.

namespace ged::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

// Inputs of the per-node successor evaluation. For every g2 vertex u:
//
//   out[u] = vertex_cost[u]
//          + (((base + eins * resolved[u]) + match_coef * match[u]) + same_coef * same[u])
//
// resolved[u] counts already-mapped g2 neighbours of u, match[u] counts
// earlier g1 neighbours of the branching vertex whose image is adjacent to u,
// same[u] the subset of those whose edge labels agree.
struct SuccessorTerms {
  const double* vertex_cost = nullptr;
  const std::uint16_t* resolved = nullptr;
  const std::uint16_t* match = nullptr;
  const std::uint16_t* same = nullptr;
  double base = 0.0;
  double eins = 0.0;
  double match_coef = 0.0;
  double same_coef = 0.0;
};

struct KernelTable {
  Isa isa;
  // acc[i] += (row[i] != 0)
  void (*accumulate_adjacent)(std::uint16_t* acc, const std::uint16_t* row, std::size_t n);
  // match[i] += (row[i] != 0); same[i] += (row[i] == label), label != 0
  void (*accumulate_edge_matches)(std::uint16_t* match, std::uint16_t* same,
                                  const std::uint16_t* row, std::uint16_t label, std::size_t n);
  void (*successor_costs)(double* out, const SuccessorTerms& terms, std::size_t n);
  // Number of values <= threshold (resp. < threshold).
  std::size_t (*count_le)(const double* values, std::size_t n, double threshold);
  std::size_t (*count_lt)(const double* values, std::size_t n, double threshold);
};

bool isa_available(Isa isa);

// Table for a specific ISA; falls back to scalar when isa is unavailable.
const KernelTable& kernels(Isa isa);

// Best available table, chosen once at first use. Setting the environment
// variable GEDKIT_SIMD=scalar forces the scalar kernels.
const KernelTable& kernels();

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(GEDKIT_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
}  // namespace detail

}  // namespace ged::simd
