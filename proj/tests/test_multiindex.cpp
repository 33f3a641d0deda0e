#include "ultrana/errors.hpp"
#include "ultrana/multiindex.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ultrana;

namespace {

mpz_class binomial(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

TEST_CASE("multi-index basics") {
  const MultiIndex a({2, 0, 3});
  CHECK(a.dim() == 3);
  CHECK(a.order() == 5);
  CHECK(a.factorial() == 12);
  CHECK(a.dominates(MultiIndex({1, 0, 3})));
  CHECK_FALSE(a.dominates(MultiIndex({1, 1, 0})));
  CHECK_THROWS_AS(MultiIndex({1, -1}), DomainError);
}

TEST_CASE("enumeration order and counts") {
  const auto two = enumerate(2, 2);
  REQUIRE(two.size() == 3);
  CHECK(two[0] == MultiIndex({2, 0}));
  CHECK(two[1] == MultiIndex({1, 1}));
  CHECK(two[2] == MultiIndex({0, 2}));
  // stars and bars: binom(total + d - 1, d - 1)
  CHECK(enumerate(4, 8).size() == binomial(11, 3).get_ui());
  CHECK(enumerate(3, 0).size() == 1);
  CHECK_THROWS_AS(enumerate(20, 40), ResourceLimitError);
}

TEST_CASE("sub-indices") {
  const MultiIndex a({2, 1});
  const auto subs = sub_indices(a);
  CHECK(subs.size() == 6);
  for (const auto& b : subs) CHECK(a.dominates(b));
  // sum over beta <= alpha of prod binom(alpha_i, beta_i) = 2^|alpha|
  const MultiIndex big({3, 1, 2});
  mpz_class total = 0;
  for (const auto& b : sub_indices(big)) {
    mpz_class p = 1;
    for (long i = 0; i < big.dim(); ++i) p *= binomial(big.components()[i], b.components()[i]);
    total += p;
  }
  CHECK(total == 64);
}

TEST_CASE("Vandermonde identity") {
  const VandermondeCheck c = vandermonde_check(MultiIndex({1, 1}), 1);
  CHECK(c.lhs == 2);
  CHECK(c.rhs == 2);
  const VandermondeCheck d = vandermonde_check(MultiIndex({2, 1}), 1);
  CHECK(d.rhs == 3);
  CHECK(d.pass());
  for (const auto& alpha : enumerate(3, 6)) {
    for (long l = 0; l <= 6; ++l) CHECK(vandermonde_check(alpha, l).pass());
  }
  CHECK_THROWS_AS(vandermonde_check(MultiIndex({1, 1}), 3), RangeError);
}

TEST_CASE("reduction to one dimension") {
  const ReductionCheck r = highdim_reduction_check(MultiIndex({1, 1}), mpq_class(1), mpq_class(2));
  // 1 + 4 / ln(1 + e) + 8 / ln^2(2 + e)
  const double expected = 1.0 + 4.0 / std::log(1.0 + std::exp(1.0)) + 8.0 / std::pow(std::log(2.0 + std::exp(1.0)), 2);
  CHECK(r.lhs.to_double() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(r.pass());
  const ReductionCheck zero = highdim_reduction_check(MultiIndex({0, 0, 0}), mpq_class(3, 2), mpq_class(5));
  CHECK(zero.lhs.to_double() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(zero.pass());
  // the split sum only depends on |alpha| and the multinomial structure
  std::vector<long> comps{3, 1, 2};
  const double base = highdim_reduction_check(MultiIndex(comps), mpq_class(2, 3), mpq_class(7, 4)).lhs.to_double();
  std::sort(comps.begin(), comps.end());
  do {
    const ReductionCheck p = highdim_reduction_check(MultiIndex(comps), mpq_class(2, 3), mpq_class(7, 4));
    CHECK(p.pass());
    CHECK(p.lhs.to_double() == doctest::Approx(base).epsilon(1e-15));
  } while (std::next_permutation(comps.begin(), comps.end()));
  CHECK_THROWS_AS(highdim_reduction_check(MultiIndex({1}), mpq_class(0), mpq_class(1)), DomainError);
  CHECK_THROWS_AS(highdim_reduction_check(MultiIndex({13}), mpq_class(1), mpq_class(1)), PreconditionError);
}

TEST_CASE("random indices and the seeded sweep") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const MultiIndex a = random_multi_index(rng, 3, 9);
    CHECK(a.order() == 9);
    CHECK(a.dim() >= 1);
    CHECK(a.dim() <= 3);
  }
  const MultiindexSweep s = multiindex_sweep(3, 6, 10, 1);
  CHECK(s.passed());
  CHECK(s.reduction_cases == 10);
  const MultiindexSweep again = multiindex_sweep(3, 6, 10, 1);
  CHECK(to_json(again) == to_json(s));
}
