#include "gedkit/topk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "gedkit/errors.hpp"
#include "gedkit/simd/kernels.hpp"

namespace ged {
namespace {

constexpr std::size_t kMinChunk = 4096;
constexpr std::size_t kMinLocalBest = 5;

struct Chunking {
  std::size_t count;
  std::size_t size;

  std::size_t begin(std::size_t c) const { return c * size; }
  std::size_t end(std::size_t c, std::size_t n) const { return std::min(n, (c + 1) * size); }
};

Chunking make_chunks(std::size_t n, unsigned workers) {
  const std::size_t target = std::max<std::size_t>(1, std::size_t{workers} * 4);
  std::size_t size = std::max(kMinChunk, (n + target - 1) / target);
  return {(n + size - 1) / size, size};
}

// tags == nullptr means tag == position.
std::vector<std::size_t> select_impl(std::span<const double> costs, const std::uint64_t* tags,
                                     std::size_t k, unsigned workers) {
  if (k == 0) throw InvalidArgument("select_k_smallest: k must be at least 1");
  const std::size_t n = costs.size();
  std::vector<std::size_t> result;
  if (k >= n) {
    result.resize(n);
    std::iota(result.begin(), result.end(), std::size_t{0});
    return result;
  }
  workers = std::max(1u, workers);
  const auto& kern = simd::kernels();
  const Chunking chunks = make_chunks(n, workers);
  std::size_t local_best = std::max(kMinLocalBest, (k + chunks.count - 1) / chunks.count);
  const double* data = costs.data();

  // Local winners of each chunk, concatenated. A short last chunk can leave
  // fewer than k winners, so widen the lists until they cover k.
  std::vector<std::size_t> winner_offset(chunks.count + 1, 0);
  for (;;) {
    for (std::size_t c = 0; c < chunks.count; ++c) {
      winner_offset[c + 1] =
          winner_offset[c] + std::min(local_best, chunks.end(c, n) - chunks.begin(c));
    }
    if (winner_offset.back() >= k) break;
    local_best *= 2;
  }
  std::vector<double> winners(winner_offset.back());
#pragma omp parallel for num_threads(workers) schedule(static)
  for (std::size_t c = 0; c < chunks.count; ++c) {
    const std::size_t b = chunks.begin(c);
    const std::size_t e = chunks.end(c, n);
    const std::size_t keep = winner_offset[c + 1] - winner_offset[c];
    std::vector<double> local(data + b, data + e);
    if (keep < local.size()) {
      std::nth_element(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(keep - 1),
                       local.end());
    }
    std::copy_n(local.begin(), keep, winners.begin() + static_cast<std::ptrdiff_t>(winner_offset[c]));
  }

  // The k-th smallest of a subset bounds the true k-th smallest from above.
  std::nth_element(winners.begin(), winners.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   winners.end());
  const double upper = winners[k - 1];
  winners = {};

  std::vector<std::size_t> below_upper(chunks.count + 1, 0);
#pragma omp parallel for num_threads(workers) schedule(static)
  for (std::size_t c = 0; c < chunks.count; ++c) {
    const std::size_t b = chunks.begin(c);
    below_upper[c + 1] = kern.count_le(data + b, chunks.end(c, n) - b, upper);
  }
  std::partial_sum(below_upper.begin(), below_upper.end(), below_upper.begin());
  std::vector<double> pool(below_upper.back());
#pragma omp parallel for num_threads(workers) schedule(static)
  for (std::size_t c = 0; c < chunks.count; ++c) {
    std::size_t out = below_upper[c];
    for (std::size_t i = chunks.begin(c), e = chunks.end(c, n); i < e; ++i) {
      if (data[i] <= upper) pool[out++] = data[i];
    }
  }
  std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k - 1), pool.end());
  const double threshold = pool[k - 1];
  pool = {};

  // Per chunk: strictly-below count and tie count at the threshold.
  std::vector<std::size_t> below(chunks.count, 0);
  std::vector<std::size_t> ties(chunks.count, 0);
#pragma omp parallel for num_threads(workers) schedule(static)
  for (std::size_t c = 0; c < chunks.count; ++c) {
    const std::size_t b = chunks.begin(c);
    const std::size_t len = chunks.end(c, n) - b;
    below[c] = kern.count_lt(data + b, len, threshold);
    ties[c] = kern.count_le(data + b, len, threshold) - below[c];
  }
  const std::size_t total_below = std::accumulate(below.begin(), below.end(), std::size_t{0});
  const std::size_t total_ties = std::accumulate(ties.begin(), ties.end(), std::size_t{0});
  const std::size_t need = k - total_below;

  // Tie admission: positional tags admit the first `need` ties in scan
  // order; explicit tags admit the `need` smallest (tag, position) pairs.
  std::vector<std::size_t> ties_admitted(chunks.count, 0);
  std::pair<std::uint64_t, std::size_t> last_tie{0, 0};
  if (tags == nullptr || need == total_ties) {
    std::size_t left = need;
    for (std::size_t c = 0; c < chunks.count; ++c) {
      ties_admitted[c] = std::min(left, ties[c]);
      left -= ties_admitted[c];
    }
  } else {
    std::vector<std::pair<std::uint64_t, std::size_t>> tied;
    tied.reserve(total_ties);
    for (std::size_t i = 0; i < n; ++i) {
      if (data[i] == threshold) tied.emplace_back(tags[i], i);
    }
    std::nth_element(tied.begin(), tied.begin() + static_cast<std::ptrdiff_t>(need - 1),
                     tied.end());
    last_tie = tied[need - 1];
  }

  std::vector<std::size_t> out_offset(chunks.count + 1, 0);
  for (std::size_t c = 0; c < chunks.count; ++c) {
    out_offset[c + 1] = out_offset[c] + below[c] + ties_admitted[c];
  }
  const bool explicit_ties = tags != nullptr && need != total_ties;
  if (explicit_ties) {
    // Offsets depend on which ties land in which chunk; count them first.
    for (std::size_t c = 0; c < chunks.count; ++c) {
      std::size_t admitted = 0;
      for (std::size_t i = chunks.begin(c), e = chunks.end(c, n); i < e; ++i) {
        if (data[i] == threshold && std::pair{tags[i], i} <= last_tie) ++admitted;
      }
      ties_admitted[c] = admitted;
      out_offset[c + 1] = out_offset[c] + below[c] + admitted;
    }
  }

  result.resize(k);
#pragma omp parallel for num_threads(workers) schedule(static)
  for (std::size_t c = 0; c < chunks.count; ++c) {
    std::size_t out = out_offset[c];
    std::size_t tie_budget = ties_admitted[c];
    for (std::size_t i = chunks.begin(c), e = chunks.end(c, n); i < e; ++i) {
      const double x = data[i];
      if (x < threshold) {
        result[out++] = i;
      } else if (x == threshold && tie_budget > 0) {
        if (explicit_ties && !(std::pair{tags[i], i} <= last_tie)) continue;
        result[out++] = i;
        --tie_budget;
      }
    }
  }
  return result;
}

}  // namespace

std::vector<std::size_t> select_k_smallest_indices(std::span<const double> costs, std::size_t k,
                                                   unsigned workers) {
  return select_impl(costs, nullptr, k, workers);
}

std::vector<Candidate> select_k_smallest(std::span<const Candidate> candidates, std::size_t k,
                                         unsigned workers) {
  std::vector<double> costs(candidates.size());
  std::vector<std::uint64_t> tags(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double c = candidates[i].cost;
    if (!std::isfinite(c) || c < 0.0) {
      throw InvalidArgument("candidate " + std::to_string(i) + " has invalid cost");
    }
    costs[i] = c;
    tags[i] = candidates[i].tag;
  }
  const auto picked = select_impl(costs, tags.data(), k, workers);
  std::vector<Candidate> out;
  out.reserve(picked.size());
  for (auto i : picked) out.push_back(candidates[i]);
  return out;
}

}  // namespace ged
