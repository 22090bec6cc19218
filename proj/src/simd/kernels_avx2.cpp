// Compiled with -mavx2 only; never reached unless the CPU reports AVX2.
#include <immintrin.h>

#include "gedkit/simd/kernels.hpp"

namespace ged::simd {
namespace {

void accumulate_adjacent(std::uint16_t* acc, const std::uint16_t* row, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + i));
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
    // is_zero is all-ones where row == 0; acc + 1 + is_zero == acc + (row != 0)
    __m256i is_zero = _mm256_cmpeq_epi16(r, zero);
    a = _mm256_add_epi16(a, _mm256_add_epi16(is_zero, _mm256_set1_epi16(1)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), a);
  }
  for (; i < n; ++i) acc[i] = static_cast<std::uint16_t>(acc[i] + (row[i] != 0));
}

void accumulate_edge_matches(std::uint16_t* match, std::uint16_t* same, const std::uint16_t* row,
                             std::uint16_t label, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  const __m256i one = _mm256_set1_epi16(1);
  const __m256i lab = _mm256_set1_epi16(static_cast<short>(label));
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + i));
    __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(match + i));
    __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(same + i));
    m = _mm256_add_epi16(m, _mm256_add_epi16(_mm256_cmpeq_epi16(r, zero), one));
    s = _mm256_sub_epi16(s, _mm256_cmpeq_epi16(r, lab));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(match + i), m);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(same + i), s);
  }
  for (; i < n; ++i) {
    match[i] = static_cast<std::uint16_t>(match[i] + (row[i] != 0));
    same[i] = static_cast<std::uint16_t>(same[i] + (row[i] == label));
  }
}

inline __m256d load_u16_as_pd(const std::uint16_t* p) {
  __m128i four = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(p));
  return _mm256_cvtepi32_pd(_mm_cvtepu16_epi32(four));
}

void successor_costs(double* out, const SuccessorTerms& t, std::size_t n) {
  const __m256d base = _mm256_set1_pd(t.base);
  const __m256d eins = _mm256_set1_pd(t.eins);
  const __m256d match_coef = _mm256_set1_pd(t.match_coef);
  const __m256d same_coef = _mm256_set1_pd(t.same_coef);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d edge = _mm256_add_pd(base, _mm256_mul_pd(eins, load_u16_as_pd(t.resolved + i)));
    edge = _mm256_add_pd(edge, _mm256_mul_pd(match_coef, load_u16_as_pd(t.match + i)));
    edge = _mm256_add_pd(edge, _mm256_mul_pd(same_coef, load_u16_as_pd(t.same + i)));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(t.vertex_cost + i), edge));
  }
  for (; i < n; ++i) {
    double edge = t.base + t.eins * static_cast<double>(t.resolved[i]);
    edge = edge + t.match_coef * static_cast<double>(t.match[i]);
    edge = edge + t.same_coef * static_cast<double>(t.same[i]);
    out[i] = t.vertex_cost[i] + edge;
  }
}

template <int Predicate>
std::size_t count_cmp(const double* values, std::size_t n, double threshold) {
  const __m256d th = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d hit = _mm256_cmp_pd(_mm256_loadu_pd(values + i), th, Predicate);
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(hit)));
  }
  for (; i < n; ++i) {
    if constexpr (Predicate == _CMP_LE_OQ) {
      count += values[i] <= threshold;
    } else {
      count += values[i] < threshold;
    }
  }
  return count;
}

std::size_t count_le(const double* values, std::size_t n, double threshold) {
  return count_cmp<_CMP_LE_OQ>(values, n, threshold);
}

std::size_t count_lt(const double* values, std::size_t n, double threshold) {
  return count_cmp<_CMP_LT_OQ>(values, n, threshold);
}

}  // namespace

namespace detail {
const KernelTable kAvx2Kernels{
    Isa::Avx2, accumulate_adjacent, accumulate_edge_matches, successor_costs, count_le, count_lt,
};
}  // namespace detail

}  // namespace ged::simd
