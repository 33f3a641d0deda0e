#include "ultrana/big_complex.hpp"
#include "ultrana/big_real.hpp"
#include "ultrana/combinatorics.hpp"
#include "ultrana/errors.hpp"
#include "ultrana/log_magnitude.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace ultrana;

namespace {

// ln n! as a plain sum of logarithms.
BigReal ln_factorial_by_sum(long n, Precision prec) {
  BigReal s(prec);
  for (long k = 2; k <= n; ++k) s += log(BigReal(k, prec));
  return s;
}

}  // namespace

TEST_CASE("precision below 64 bits is rejected") {
  CHECK_THROWS_AS(Precision(32), DomainError);
  CHECK(Precision().bits() == 256);
  CHECK(Precision(100).doubled().bits() == 200);
}

TEST_CASE("decimal parsing is exact to the working precision") {
  const Precision p(256);
  const BigReal half = BigReal::parse("0.5", p);
  CHECK(half == BigReal(1L, p) / 2L);
  const BigReal tenth = BigReal::parse("0.1", p);
  CHECK(tenth * 10L - 1L < BigReal(1e-70, p));
  CHECK_THROWS(BigReal::parse("1.5x", p));
  CHECK_THROWS(BigReal::parse("", p));
  CHECK_THROWS(BigReal::parse("inf", p));
}

TEST_CASE("log_factorial matches a sum of logarithms") {
  const Precision p(256);
  for (long n : {0L, 1L, 2L, 10L, 100L, 2500L}) {
    const BigReal expected = ln_factorial_by_sum(n, p);
    const LogMagnitude got = log_factorial(n, p);
    if (n < 2) {
      CHECK(got.log_abs().is_zero());
    } else {
      CHECK(relative_difference(got.log_abs(), expected) < BigReal(std::ldexp(1.0, 8 - 256), p));
    }
  }
  CHECK_THROWS_AS(log_factorial(-1, p), DomainError);
}

TEST_CASE("log-space arithmetic") {
  const Precision p(256);
  const LogMagnitude a = LogMagnitude::from_value(BigReal(6L, p));
  const LogMagnitude b = LogMagnitude::from_value(BigReal(4L, p));
  CHECK(relative_difference((a * b).to_big_real(), BigReal(24L, p)) < BigReal(1e-70, p));
  CHECK(relative_difference((a / b).to_big_real(), BigReal(1.5, p)) < BigReal(1e-70, p));
  CHECK(relative_difference((a + b).to_big_real(), BigReal(10L, p)) < BigReal(1e-70, p));
  CHECK(relative_difference((a - b).to_big_real(), BigReal(2L, p)) < BigReal(1e-70, p));
  CHECK((b - a).sign() == Sign::negative);
  CHECK((a - a).is_zero());
  CHECK(relative_difference(a.pow(3).to_big_real(), BigReal(216L, p)) < BigReal(1e-70, p));
  CHECK(relative_difference(b.root(2).to_big_real(), BigReal(2L, p)) < BigReal(1e-70, p));
  CHECK(b < a);
  CHECK_THROWS_AS(LogMagnitude::zero(p).log_abs(), DomainError);
}

TEST_CASE("log_sum_exp agrees with direct summation and survives huge exponents") {
  const Precision p(256);
  std::vector<BigReal> logs;
  BigReal direct(p);
  for (long k = 1; k <= 50; ++k) {
    logs.push_back(log(BigReal(k, p)));
    direct += k;
  }
  CHECK(relative_difference(log_sum_exp(logs).to_big_real(), direct) < BigReal(1e-70, p));

  // e^{100000} + e^{100000} = 2 e^{100000}
  std::vector<BigReal> big{BigReal(100000L, p), BigReal(100000L, p)};
  const BigReal expected = BigReal(100000L, p) + log2_const(p);
  CHECK(relative_difference(log_sum_exp(big).log_abs(), expected) < BigReal(1e-70, p));

  LogSumAccumulator acc(p);
  for (const auto& l : logs) acc.add_log(l);
  CHECK(relative_difference(acc.result().to_big_real(), direct) < BigReal(1e-70, p));
}

TEST_CASE("binomial rows are exact") {
  const auto row = binomial_row(10);
  CHECK(row.size() == 11);
  CHECK(row[3] == 120);
  CHECK(row[5] == 252);
  mpz_class sum = 0;
  for (const auto& b : binomial_row(60)) sum += b;
  CHECK(sum == mpz_class(1) << 60);
}

TEST_CASE("Stirling numbers of the second kind") {
  const StirlingTable s(12);
  CHECK(s(5, 2) == 15);
  CHECK(s(10, 3) == 9330);
  CHECK(s(12, 12) == 1);
  CHECK(s(7, 0) == 0);
  CHECK(s(0, 0) == 1);
  CHECK(s(4, 9) == 0);
  // Row sums are Bell numbers.
  mpz_class bell = 0;
  for (const auto& v : s.row(10)) bell += v;
  CHECK(bell == 115975);
  CHECK_THROWS_AS(StirlingTable(10, 5), ResourceLimitError);
}

TEST_CASE("Touchard polynomials: Stirling route and recurrence agree") {
  const Precision p(256);
  const BigReal one(1L, p);
  CHECK(relative_difference(touchard(10, one).to_big_real(), BigReal(115975L, p)) < BigReal(1e-70, p));
  const BigReal a = BigReal::parse("0.5", p);
  for (long n : {0L, 1L, 5L, 40L}) {
    CHECK(relative_difference(touchard(n, a).log_abs().is_zero() ? BigReal(1L, p) : touchard(n, a).to_big_real(),
                              touchard_recurrence(n, a).to_big_real()) < BigReal(1e-60, p));
  }
  // T_2(A) = A + A^2
  CHECK(relative_difference(touchard(2, a).to_big_real(), a + a * a) < BigReal(1e-70, p));
  CHECK_THROWS_AS(touchard(3, BigReal(p)), DomainError);
}

TEST_CASE("Touchard continuation beyond the Stirling cap tracks the exact recurrence") {
  const Precision p(256);
  const BigReal a = BigReal::parse("0.5", p);
  const std::vector<LogMagnitude> seq = touchard_sequence(80, a, 20);
  for (long n : {21L, 50L, 80L}) {
    const BigReal exact = touchard_recurrence(n, a).log_abs();
    CHECK(relative_difference(seq[n].log_abs(), exact) < BigReal(1e-12, p));
  }
}

TEST_CASE("log tables") {
  const Precision p(256);
  const LogTables t(20, p);
  CHECK(t.ln_shift(0) == BigReal(1L, p));
  CHECK(t.ln_ln_shift(0).is_zero());
  CHECK(relative_difference(t.ln_factorial(20), ln_factorial_by_sum(20, p)) < BigReal(1e-70, p));
  CHECK(relative_difference(exp(t.ln_binomial(20, 7)), BigReal(77520L, p)) < BigReal(1e-60, p));
}

TEST_CASE("complex helpers") {
  const Precision p(256);
  CHECK(BigComplex::i_power(2, p).re() == BigReal(-1L, p));
  CHECK(BigComplex::i_power(3, p).im() == BigReal(-1L, p));
  const BigComplex z = exp(BigComplex(BigReal(p), pi(p)));
  CHECK(abs(z.re() + 1L) < BigReal(1e-70, p));
  CHECK(abs(z.im()) < BigReal(1e-70, p));
}
