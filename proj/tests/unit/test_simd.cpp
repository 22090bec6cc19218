#include <cstring>
#include <vector>

#include "doctest.h"
#include "gedkit/simd/kernels.hpp"
#include "support.hpp"

using namespace ged::simd;

namespace {

template <class T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels") {
  const auto& k = kernels(Isa::Scalar);
  std::vector<std::uint16_t> row{0, 3, 1, 0, 3};
  std::vector<std::uint16_t> acc(5, 1), match(5, 0), same(5, 0);
  k.accumulate_adjacent(acc.data(), row.data(), 5);
  CHECK(acc == std::vector<std::uint16_t>{1, 2, 2, 1, 2});
  k.accumulate_edge_matches(match.data(), same.data(), row.data(), 3, 5);
  CHECK(match == std::vector<std::uint16_t>{0, 1, 1, 0, 1});
  CHECK(same == std::vector<std::uint16_t>{0, 1, 0, 0, 1});

  std::vector<double> vc{0, 2, 2, 0, 2}, out(5);
  SuccessorTerms t{vc.data(), acc.data(), match.data(), same.data(), 4.0, 2.0, -3.0, -1.0};
  k.successor_costs(out.data(), t, 5);
  // u=1: 2 + ((4 + 2*2) - 3*1) - 1*1 = 6
  CHECK(out[1] == 6.0);
  CHECK(out[0] == 6.0);
  CHECK(k.count_le(out.data(), 5, 6.0) == 5 - static_cast<std::size_t>(out[2] > 6.0) -
                                              static_cast<std::size_t>(out[4] > 6.0));
  CHECK(k.count_lt(out.data(), 5, 0.0) == 0);
}

TEST_CASE("vector kernels match the scalar reference bit for bit") {
  if (!isa_available(Isa::Avx2)) {
    MESSAGE("AVX2 unavailable, only the scalar table is exercised");
    return;
  }
  const auto& s = kernels(Isa::Scalar);
  const auto& v = kernels(Isa::Avx2);
  CHECK(v.isa == Isa::Avx2);
  gtest::Rng rng(99);
  for (int iter = 0; iter < 400; ++iter) {
    const std::size_t n = rng.below(300);
    std::vector<std::uint16_t> row(n);
    for (auto& x : row) x = rng.below(3) == 0 ? 0 : static_cast<std::uint16_t>(1 + rng.below(4));
    std::vector<std::uint16_t> acc(n);
    for (auto& x : acc) x = static_cast<std::uint16_t>(rng.below(60000));
    auto acc2 = acc;
    s.accumulate_adjacent(acc.data(), row.data(), n);
    v.accumulate_adjacent(acc2.data(), row.data(), n);
    CHECK(same_bits(acc, acc2));

    std::vector<std::uint16_t> m(n), sm(n);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = static_cast<std::uint16_t>(rng.below(100));
      sm[i] = static_cast<std::uint16_t>(rng.below(100));
    }
    auto m2 = m, sm2 = sm;
    const auto label = static_cast<std::uint16_t>(1 + rng.below(4));
    s.accumulate_edge_matches(m.data(), sm.data(), row.data(), label, n);
    v.accumulate_edge_matches(m2.data(), sm2.data(), row.data(), label, n);
    CHECK(same_bits(m, m2));
    CHECK(same_bits(sm, sm2));

    std::vector<double> vc(n);
    for (auto& x : vc) x = rng.below(2) ? 0.0 : rng.unit() * 10.0;
    SuccessorTerms t{vc.data(), acc.data(), m.data(), sm.data(), rng.unit() * 40.0, rng.unit() * 3.0,
                     -rng.unit() * 5.0, -rng.unit()};
    std::vector<double> o1(n), o2(n);
    s.successor_costs(o1.data(), t, n);
    v.successor_costs(o2.data(), t, n);
    CHECK(same_bits(o1, o2));

    const double thr = n ? o1[rng.below(n)] : 1.0;
    CHECK(s.count_le(o1.data(), n, thr) == v.count_le(o1.data(), n, thr));
    CHECK(s.count_lt(o1.data(), n, thr) == v.count_lt(o1.data(), n, thr));
  }
}

TEST_CASE("dispatch picks a usable table") {
  const auto& k = kernels();
  CHECK(isa_available(k.isa));
  CHECK(&kernels(Isa::Scalar) == &detail::kScalarKernels);
}
