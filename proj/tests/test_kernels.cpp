#include "ultrana/errors.hpp"
#include "ultrana/kernels.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ultrana;

namespace {

// G_s(r) = 2 (4 pi)^{-d/2} / Gamma(s/2) (r/2)^nu K_nu(r), nu = (s - d)/2.
double kernel_oracle(double s, int d, double r) {
  const double nu = (s - d) / 2.0;
  return 2.0 * std::pow(4.0 * M_PI, -d / 2.0) / std::tgamma(s / 2.0) * std::pow(r / 2.0, nu) *
         boost::math::cyl_bessel_k(nu, r);
}

KernelParams params(double s, int d) {
  KernelParams p;
  p.s = s;
  p.d = d;
  return p;
}

}  // namespace

TEST_CASE("kernel against closed forms") {
  for (double r : {1e-4, 0.3, 1.0, 5.0, 30.0}) {
    CHECK(bessel_kernel(params(2, 1), r) == doctest::Approx(std::exp(-r) / 2.0).epsilon(1e-10));
    CHECK(bessel_kernel(params(2, 3), r) == doctest::Approx(std::exp(-r) / (4.0 * M_PI * r)).epsilon(1e-10));
    CHECK(bessel_kernel(params(2, 2), r) ==
          doctest::Approx(boost::math::cyl_bessel_k(0, r) / (2.0 * M_PI)).epsilon(1e-10));
    for (double s : {0.5, 1.5, 3.7}) {
      for (int d : {1, 2, 3}) CHECK(bessel_kernel(params(s, d), r) == doctest::Approx(kernel_oracle(s, d, r)).epsilon(1e-9));
    }
  }
}

TEST_CASE("kernel at the origin") {
  CHECK(bessel_kernel(params(3, 1), 0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(bessel_kernel(params(1, 1), 0.0), SingularityError);
  CHECK_THROWS_AS(bessel_kernel(params(2, 3), 0.0), SingularityError);
  CHECK_THROWS_AS(validate(params(0, 1)), DomainError);
  CHECK_THROWS_AS(validate(params(1, 0)), DomainError);
}

TEST_CASE("radial derivative against finite differences") {
  for (double s : {1.5, 2.0, 3.0}) {
    for (int d : {1, 2, 3}) {
      for (double r : {0.05, 0.7, 4.0}) {
        const double h = 1e-5 * r;
        const double fd = (bessel_kernel(params(s, d), r - h) - bessel_kernel(params(s, d), r + h)) / (2.0 * h);
        CHECK(bessel_kernel_radial_derivative(params(s, d), r) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
  CHECK(bessel_kernel_radial_derivative(params(2, 1), 2.0) == doctest::Approx(std::exp(-2.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("kernel masses and gradient norms") {
  CHECK(unit_sphere_area(1) == 2.0);
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI));
  for (double s : {0.5, 2.0, 4.0}) {
    for (int d : {1, 2, 3}) {
      INFO("s = " << s << ", d = " << d);
      CHECK(kernel_mass(params(s, d)) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  CHECK(grad_kernel_l1(1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(grad_kernel_l1(2) == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
  CHECK(grad_kernel_l1(3) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("near and far bounds hold for sample parameters") {
  for (double s : {0.5, 1.0, 2.0, 3.5}) {
    for (int d : {1, 2, 3}) {
      const LemmaCheckReport r = check_kernel_bounds(params(s, d));
      CHECK(r.passed());
      CHECK(std::isfinite(r.metric("near_max_ratio").to_double()));
      CHECK(std::isfinite(r.metric("far_max_ratio").to_double()));
    }
  }
  const auto samples = kernel_sweep(params(2, 1));
  CHECK(samples.size() == 88);
  for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].value < samples[i - 1].value);
}

TEST_CASE("gradient bound") {
  const LemmaCheckReport r = check_grad_bound(params(2, 1));
  CHECK(r.passed());
  // |G_2'| / G_1(r / sqrt 2) = (e^{-r} / 2) pi / K_0(r / sqrt 2) in one dimension
  const double r0 = 1e-6;
  const double expected = std::exp(-r0) / 2.0 * M_PI / boost::math::cyl_bessel_k(0, r0 / std::sqrt(2.0));
  CHECK(r.rows.front().ratio.to_double() == doctest::Approx(expected).epsilon(1e-8));
  CHECK_THROWS_AS(check_grad_bound(params(1, 1)), PreconditionError);
}

TEST_CASE("kernel CSV layout") {
  std::ostringstream os;
  const auto samples = kernel_sweep(params(2, 2));
  write_kernel_csv(os, params(2, 2), samples);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "s,d,r,G_value,bound_ratio");
}
