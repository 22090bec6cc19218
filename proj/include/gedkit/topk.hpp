#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ged {

struct Candidate {
  double cost = 0.0;
  std::uint64_t tag = 0;

  bool operator==(const Candidate&) const = default;
};

/*
 * Unordered selection of the k cheapest candidates.
 *
 * No full sort is performed. The pool is split into chunks, each chunk keeps
 * its local best L = max(5, ceil(k / chunks)) costs, the k-th smallest of
 * those local winners gives an upper bound on the true threshold, and a
 * second selection over the (few) candidates under that bound pins the exact
 * k-th smallest cost t. Everything strictly below t is admitted; candidates
 * costing exactly t are admitted in ascending tag order until k are chosen.
 *
 * The result keeps the input order of the admitted candidates and does not
 * depend on the worker count. Throws InvalidArgument when k == 0 or a cost
 * is negative or not finite.
 */
std::vector<Candidate> select_k_smallest(std::span<const Candidate> candidates, std::size_t k,
                                         unsigned workers = 1);

// Same contract with tag == position. Returns ascending positions. Costs are
// trusted to be finite and non-negative.
std::vector<std::size_t> select_k_smallest_indices(std::span<const double> costs, std::size_t k,
                                                   unsigned workers = 1);

}  // namespace ged
