#include "ultrana/errors.hpp"
#include "ultrana/majorant.hpp"
#include "ultrana/propagator.hpp"
#include "ultrana/sharp_example.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace ultrana;

namespace {

const Precision kPrec(256);

double to_d(const BigReal& x) { return x.to_double(); }

// Second-order recurrence in long double with explicit binomials.
std::vector<long double> second_order_oracle(long double c0, long double b0, long double b1, long double b2, long n_max) {
  std::vector<long double> b{b0, b1, b2};
  auto binom = [](long n, long k) { return std::exp(std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L)); };
  for (long n = 2; n < n_max; ++n) {
    long double s = 0;
    for (long l = 0; l <= n; ++l) s += binom(n, l) * std::pow(c0, static_cast<long double>(l)) * b[n - l];
    for (long l = 0; l <= n - 1; ++l) s += binom(n - 1, l) * std::pow(c0, static_cast<long double>(l)) * b[n - 1 - l];
    b.push_back(s);
  }
  return b;
}

}  // namespace

TEST_CASE("base case from the coercivity constant") {
  const BaseCase b = base_case(BigReal(2L, kPrec));
  CHECK(to_d(b.b0) == 1.0);
  CHECK(to_d(b.b1) == doctest::Approx(2.0 * std::sqrt(6.0)).epsilon(1e-15));
  CHECK(to_d(b.b2) == doctest::Approx(6.0).epsilon(1e-15));
  const BaseCase one = base_case(BigReal(1L, kPrec));
  CHECK(to_d(one.b1) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(to_d(one.b2) == doctest::Approx(3.0).epsilon(1e-15));
  // b1^2 = c_p^2 b2
  const BigReal cp = BigReal::parse("1.7", kPrec);
  const BaseCase c = base_case(cp);
  CHECK(to_d(abs(c.b1 * c.b1 - cp * cp * c.b2)) < 1e-60);
  CHECK_THROWS_AS(base_case(BigReal(0.5, kPrec)), DomainError);
}

TEST_CASE("second-order propagation matches a direct recurrence") {
  const BaseCase base = base_case(BigReal(2L, kPrec));
  const BoundSequence seq = propagate_second_order(BigReal(1.5, kPrec), base, 40);
  CHECK(seq.size_n() == 40);
  CHECK(seq.kind == EquationKind::second_order);
  const auto oracle = second_order_oracle(1.5L, 1.0L, 2.0L * std::sqrt(6.0L), 6.0L, 40);
  for (long n = 0; n <= 40; ++n) {
    CHECK(to_d(seq.bounds[n].log_abs()) == doctest::Approx(static_cast<double>(std::log(oracle[n]))).epsilon(1e-12));
  }
  // b3 = (b2 + 2 C0 b1 + C0^2 b0) + (b1 + C0 b0)
  const double c0 = 1.5, b1 = 2.0 * std::sqrt(6.0);
  const double b3 = (6.0 + 2 * c0 * b1 + c0 * c0) + (b1 + c0);
  CHECK(to_d(seq.bounds[3].to_big_real()) == doctest::Approx(b3).epsilon(1e-14));
}

TEST_CASE("zero coupling gives a Fibonacci-type sequence") {
  const BaseCase base = base_case(BigReal(1L, kPrec));
  const BoundSequence seq = propagate_second_order(BigReal(0L, kPrec), base, 30);
  for (long n = 3; n <= 30; ++n) {
    const BigReal expected = seq.bounds[n - 1].to_big_real() + seq.bounds[n - 2].to_big_real();
    CHECK(to_d(relative_difference(seq.bounds[n].to_big_real(), expected)) < 1e-60);
  }
}

TEST_CASE("propagation preconditions") {
  const BaseCase base = base_case(BigReal(2L, kPrec));
  CHECK_THROWS_AS(propagate_second_order(BigReal(1L, kPrec), base, 2), PreconditionError);
  CHECK_THROWS_AS(propagate_second_order(BigReal(-1L, kPrec), base, 10), PreconditionError);
  CHECK_THROWS_AS(propagate_first_order(BigReal(1L, kPrec), 0), PreconditionError);
}

TEST_CASE("first-order propagation") {
  const BoundSequence zero = propagate_first_order(BigReal(0L, kPrec), 20);
  for (const auto& b : zero.bounds) CHECK(to_d(b.to_big_real()) == doctest::Approx(1.0).epsilon(1e-15));
  const BoundSequence seq = propagate_first_order(BigReal(3L, kPrec), 20);
  CHECK(to_d(seq.bounds[1].to_big_real()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(to_d(seq.bounds[2].to_big_real()) == doctest::Approx(4.0).epsilon(1e-15));
  // b_{n+1} = sum_l binom(n,l) C0^l b_{n-l}; b3 = b2 + 2*3*b1 + 9*b0
  CHECK(to_d(seq.bounds[3].to_big_real()) == doctest::Approx(4.0 + 6.0 + 9.0).epsilon(1e-15));
  CHECK(!seq.base.has_value());
}

TEST_CASE("prefix stability and monotonicity in C0") {
  const BaseCase base = base_case(BigReal(2L, kPrec));
  const BoundSequence a = propagate_second_order(BigReal(1L, kPrec), base, 50);
  const BoundSequence b = propagate_second_order(BigReal(1L, kPrec), base, 120);
  for (long n = 0; n <= 50; ++n) CHECK(a.bounds[n].log_abs() == b.bounds[n].log_abs());
  const BoundSequence c = propagate_second_order(BigReal(2L, kPrec), base, 50);
  for (long n = 3; n <= 50; ++n) CHECK(a.bounds[n] < c.bounds[n]);
}

TEST_CASE("fit_K inverts the closed majorant") {
  const BigReal c0(1L, kPrec), kappa(2L, kPrec);
  const BigReal k_true = BigReal::parse("0.75", kPrec);
  const BigReal c_star = kappa * c0 + k_true * kappa_factor(kappa);
  std::vector<LogMagnitude> bounds;
  for (long n = 0; n <= 60; ++n) bounds.push_back(closed_majorant(n, c_star));
  const std::vector<BigReal> cn = implied_constants(bounds, BigReal(1L, kPrec));
  for (long n = 1; n <= 60; ++n) CHECK(to_d(relative_difference(cn[n], c_star)) < 1e-60);
  CHECK(to_d(relative_difference(fit_K(bounds, kappa, c0), k_true)) < 1e-60);
  // pointwise larger bounds need a larger K
  std::vector<LogMagnitude> larger = bounds;
  larger[30] = larger[30] * LogMagnitude::from_value(BigReal(2L, kPrec));
  CHECK(fit_K(larger, kappa, c0) > fit_K(bounds, kappa, c0));
  // a prefactor of 2 absorbs the doubling at n = 30
  CHECK(to_d(relative_difference(fit_K(larger, kappa, c0, BigReal(2L, kPrec)), k_true)) < 1e-60);
  CHECK(fit_K(bounds, BigReal(50L, kPrec), c0).is_zero());
  CHECK_THROWS_AS(fit_K(bounds, BigReal(1L, kPrec), c0), DomainError);
}

TEST_CASE("fitted K is stable as N grows") {
  const BaseCase base = base_case(BigReal(2L, kPrec));
  const BigReal kappa(2L, kPrec);
  const BoundSequence s250 = propagate_second_order(BigReal(1L, kPrec), base, 250);
  const BoundSequence s500 = propagate_second_order(BigReal(1L, kPrec), base, 500);
  const double k250 = to_d(fit_K(s250, kappa));
  const double k500 = to_d(fit_K(s500, kappa));
  CHECK(k250 > 0.0);
  CHECK(std::abs(k500 - k250) <= 0.05 * k250);
  const auto cn = implied_constants(s500.bounds, BigReal(1L, kPrec));
  CHECK(eventually_decreasing(std::span<const BigReal>(cn).subspan(1), 100));
}

TEST_CASE("implied constants for large C0 still rise at N = 500") {
  // Recorded behaviour: the envelope constants have not turned over yet.
  const BaseCase base = base_case(BigReal(2L, kPrec));
  const BoundSequence s = propagate_second_order(BigReal(10L, kPrec), base, 500);
  const auto cn = implied_constants(s.bounds, BigReal(1L, kPrec));
  CHECK_FALSE(eventually_decreasing(std::span<const BigReal>(cn).subspan(1), 100));
  CHECK(fit_K(s, BigReal(2L, kPrec)).is_zero());
}

TEST_CASE("first-order bounds dominate the sharp example") {
  for (long c0 : {1L, 5L}) {
    const BigReal c(c0, kPrec);
    const BoundSequence seq = propagate_first_order(c, 200);
    const SharpExample ex(c);
    for (long n : {1L, 10L, 50L, 200L}) {
      CHECK(derivative_at_zero(ex, n).abs() <= seq.bounds[n].to_big_real());
    }
  }
}

TEST_CASE("eventually_decreasing window rules") {
  std::vector<BigReal> v{BigReal(3L, kPrec), BigReal(5L, kPrec), BigReal(4L, kPrec), BigReal(2L, kPrec)};
  CHECK(eventually_decreasing(v, 3));
  CHECK_FALSE(eventually_decreasing(v, 4));
  CHECK_THROWS_AS(eventually_decreasing(v, 0), PreconditionError);
  CHECK_THROWS_AS(eventually_decreasing(v, 5), PreconditionError);
}

TEST_CASE("bounds CSV layout") {
  const BaseCase base = base_case(BigReal(2L, kPrec));
  const BoundSequence seq = propagate_second_order(BigReal(1L, kPrec), base, 5);
  std::ostringstream os;
  write_bounds_csv(os, seq, BigReal(2L, kPrec), BigReal(1L, kPrec));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,log_b_n,implied_C_n,envelope_margin");
  long rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
  const auto j = to_json(seq, BigReal(2L, kPrec), BigReal(1L, kPrec));
  CHECK(j.contains("base_case"));
}
