#include "ultrana/errors.hpp"
#include "ultrana/sharp_example.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <json.hpp>
#include <sstream>

using namespace ultrana;

namespace {

const Precision kPrec(256);

double to_d(const BigReal& x) { return x.to_double(); }

SharpExample example(long c0) { return SharpExample(BigReal(c0, kPrec)); }

// Central difference of u(x) = e^{-A} e^{A e^{i C0 x}} in double.
std::complex<double> u_double(double c0, double x) {
  const double a = 1.0 / (1.0 + c0 * c0);
  return std::exp(-a) * std::exp(a * std::exp(std::complex<double>(0.0, c0 * x)));
}

}  // namespace

TEST_CASE("low-order derivatives at zero") {
  const SharpExample ex = example(3);
  const double a = 0.1;
  CHECK(to_d(ex.a()) == doctest::Approx(a).epsilon(1e-15));
  CHECK(to_d(ex.period()) == doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-15));
  const BigComplex d1 = derivative_at_zero(ex, 1);
  CHECK(to_d(d1.re()) == doctest::Approx(0.0));
  CHECK(to_d(d1.im()) == doctest::Approx(3.0 * a).epsilon(1e-15));
  const BigComplex d2 = derivative_at_zero(ex, 2);
  CHECK(to_d(d2.re()) == doctest::Approx(-9.0 * (a + a * a)).epsilon(1e-15));
  CHECK(to_d(d2.im()) == doctest::Approx(0.0));
  CHECK(to_d(derivative_at_zero(ex, 0).re()) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("closed form and recurrence agree at zero") {
  for (long c0 : {1L, 5L}) {
    const SharpExample ex = example(c0);
    for (long n : {1L, 10L, 60L}) {
      const BigComplex s = derivative_at_zero(ex, n);
      const BigComplex r = derivative_at_zero_recurrence(ex, n);
      CHECK(to_d((s - r).abs() / s.abs()) < 1e-60);
    }
  }
}

TEST_CASE("grid derivatives against finite differences and symmetry") {
  const SharpExample ex = example(2);
  const long grid = 64;
  const auto d0 = derivative_on_grid(ex, 0, grid);
  const auto d1 = derivative_on_grid(ex, 1, grid);
  const double period = to_d(ex.period());
  const double h = 1e-5;
  for (long m = 0; m < grid; m += 7) {
    const double x = period * m / grid;
    // |u(x)| = e^{A (cos C0 x - 1)}
    CHECK(to_d(d0[m].abs()) == doctest::Approx(std::exp(0.2 * (std::cos(2.0 * x) - 1.0))).epsilon(1e-14));
    const std::complex<double> fd = (u_double(2.0, x + h) - u_double(2.0, x - h)) / (2.0 * h);
    CHECK(to_d(d1[m].re()) == doctest::Approx(fd.real()).epsilon(1e-8));
    CHECK(to_d(d1[m].im()) == doctest::Approx(fd.imag()).epsilon(1e-8));
  }
  const auto d5 = derivative_on_grid(ex, 5, grid);
  for (long m = 1; m < grid; ++m) {
    CHECK(to_d(relative_difference(d5[m].abs(), d5[grid - m].abs())) < 1e-50);
  }
  CHECK(to_d(grid_method_disagreement(ex, 20, 256)) < kGridAgreementTolerance);
}

TEST_CASE("sup-norm brackets") {
  const SharpExample ex = example(1);
  const SupNormBracket b0 = sup_norm_bracket(ex, 0, 256);
  CHECK(to_d(b0.lower.to_big_real()) == doctest::Approx(1.0).epsilon(1e-15));
  const SupNormBracket b1 = sup_norm_bracket(ex, 1, 256);
  CHECK(to_d(b1.lower.to_big_real()) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b1.lower <= b1.upper);
  // lower is attained at zero: C0^n T_n(A)
  for (long n : {5L, 20L}) {
    const SupNormBracket b = sup_norm_bracket(ex, n, 1024);
    CHECK(to_d(relative_difference(b.lower.to_big_real(), derivative_at_zero(ex, n).abs())) < 1e-50);
  }
  const SupNormBracket coarse = sup_norm_bracket(ex, 30, 1024);
  const SupNormBracket fine = sup_norm_bracket(ex, 30, 4096);
  CHECK(fine.relative_width() < coarse.relative_width());
  const SupNormBracket refined = sup_norm_bracket_refined(ex, 30, 1024);
  CHECK(to_d(refined.relative_width()) <= kBracketTargetWidth);
  const auto all = sup_norm_brackets(ex, 30, 1024);
  CHECK(all.size() == 31);
  CHECK(all[30].upper.log_abs() == coarse.upper.log_abs());
}

TEST_CASE("Cauchy bound") {
  for (long c0 : {1L, 5L}) {
    const SharpExample ex = example(c0);
    const auto brackets = sup_norm_brackets(ex, 200, 1024);
    for (long n : {3L, 10L, 50L, 200L}) {
      const CauchyBound cb = cauchy_bound(ex, n);
      // default radius satisfies A e^{C0 r} = n / ln n
      const double lhs = to_d(ex.a()) * std::exp(static_cast<double>(c0) * to_d(cb.r));
      CHECK(lhs == doctest::Approx(n / std::log(static_cast<double>(n))).epsilon(1e-12));
      CHECK(cb.minimized <= cb.bound);
      CHECK(brackets[n].lower <= cb.minimized);
    }
  }
  const SharpExample ex = example(1);
  // n! r^{-n} e^{-A} e^{A e^{C0 r}} at r = 1, n = 4
  const CauchyBound fixed = cauchy_bound(ex, 4, BigReal(1L, kPrec));
  CHECK(to_d(fixed.bound.to_big_real()) == doctest::Approx(24.0 * std::exp(-0.5 + 0.5 * std::exp(1.0))).epsilon(1e-14));
  CHECK_THROWS_AS(cauchy_bound(ex, 2), PreconditionError);
  CHECK_THROWS_AS(cauchy_bound(ex, 4, BigReal(0L, kPrec)), DomainError);
}

TEST_CASE("falsification of the lambda bound") {
  const SharpExample ex = example(1);
  std::ifstream in(std::string(ULTRANA_GOLDEN_DIR) + "/falsify_lambda.json");
  REQUIRE(in);
  const nlohmann::json golden = nlohmann::json::parse(in);
  const FalsificationResult r = falsify_lambda(ex, BigReal::parse(golden["C"].get<std::string>(), kPrec),
                                               BigReal::parse(golden["lambda"].get<std::string>(), kPrec),
                                               golden["nmax"].get<long>());
  REQUIRE(r.violating_n.has_value());
  CHECK(*r.violating_n == golden["violating_n"].get<long>());

  // C = 1/2, lambda = 2: lhs(1) = A = 1/2, rhs(1) = C / ln^2(1 + e)
  const FalsificationResult early = falsify_lambda(ex, BigReal(0.5, kPrec), BigReal(2L, kPrec), 10);
  REQUIRE(early.violating_n.has_value());
  CHECK(*early.violating_n == 1);
  const double l = std::log(1.0 + std::exp(1.0));
  CHECK(to_d(early.lhs_over_rhs_at_n) == doctest::Approx(l * l).epsilon(1e-14));

  // n = 0 has lhs = rhs = 1 and never violates
  const FalsificationResult none = falsify_lambda(ex, BigReal(50L, kPrec), BigReal(1L, kPrec), 300);
  CHECK(!none.violating_n.has_value());
  CHECK_THROWS_AS(falsify_lambda(ex, BigReal(1L, kPrec), BigReal(0.5, kPrec), 10), DomainError);
  const auto j = to_json(r);
  CHECK(j["violating_n"] == golden["violating_n"]);
}

TEST_CASE("falsification of the kappa bound") {
  const SharpExample ex = example(1);
  const FalsificationResult r = falsify_kappa(ex, BigReal(0.99, kPrec), BigReal(10L, kPrec), 500);
  CHECK(!r.violating_n.has_value());
  const FalsificationResult hit = falsify_kappa(example(40), BigReal(0.5, kPrec), BigReal(1L, kPrec), 2000);
  CHECK(hit.violating_n.has_value());
  CHECK_THROWS_AS(falsify_kappa(ex, BigReal(1L, kPrec), BigReal(1L, kPrec), 10), DomainError);
  CHECK_THROWS_AS(falsify_kappa(ex, BigReal(0.5, kPrec), BigReal(0L, kPrec), 10), DomainError);
}

TEST_CASE("growth along the imaginary axis") {
  const SharpExample ex = example(2);
  CHECK(to_d(imaginary_axis_growth(ex, BigReal(0L, kPrec))) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(to_d(imaginary_axis_growth(ex, BigReal(-1L, kPrec))) ==
        doctest::Approx(std::exp(0.2 * (std::exp(2.0) - 1.0))).epsilon(1e-14));
  // Taylor series sum_n u^{(n)}(0) (i y)^n / n! = sum_n (-y)^n |u^{(n)}(0)| / n!
  for (double y : {-0.7, 0.4}) {
    double s = 0;
    double fact = 1;
    for (long n = 0; n <= 80; ++n) {
      if (n > 0) fact *= static_cast<double>(n);
      s += std::pow(-y, static_cast<double>(n)) * to_d(derivative_at_zero(ex, n).abs()) / fact;
    }
    CHECK(to_d(imaginary_axis_growth(ex, BigReal(y, kPrec))) == doctest::Approx(s).epsilon(1e-10));
  }
}

TEST_CASE("source term bounds") {
  for (const char* text : {"0.5", "1", "5"}) {
    const BigReal c0 = BigReal::parse(text, kPrec);
    const SharpExample ex(c0);
    for (long n = 0; n <= 50; ++n) {
      const BigReal cn = pow(c0, BigReal(n, kPrec));
      CHECK(ex.a() * cn * c0 <= cn);
      CHECK(ex.a() * cn * c0 * c0 <= cn);
    }
  }
}

TEST_CASE("sharp CSV layout") {
  std::ostringstream os;
  write_sharp_csv(os, example(1), 10, BigReal(2L, kPrec), BigReal(1L, kPrec), 256);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,log_sup_lower,log_sup_upper,log_cauchy_bound,log_theorem_envelope,margin");
  long rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);
  CHECK_THROWS_AS(SharpExample(BigReal(0L, kPrec)), DomainError);
}
