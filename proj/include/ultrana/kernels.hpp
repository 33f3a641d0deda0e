#pragma once

#include "ultrana/report.hpp"

#include <json.hpp>

#include <ostream>
#include <vector>

namespace ultrana {

struct QuadratureSpec {
  /// Panels over the truncated v = ln t range; each panel is adaptive Gauss-Kronrod.
  int panels = 16;
  /// Relative tolerance per panel and for the panel-doubling self-check.
  double tolerance = 1e-11;
};

struct KernelParams {
  double s = 2.0;
  int d = 1;
  QuadratureSpec quadrature;
};

/// Throws DomainError unless s > 0, d >= 1 and tolerance > 0.
void validate(const KernelParams& params);

/// G_s(r) = (2 sqrt(pi))^{-d} / Gamma(s/2) int_0^inf e^{-t} e^{-r^2/(4t)} t^{(s-d)/2} dt/t.
/// Throws SingularityError for r = 0 with s <= d, ToleranceError when doubling
/// the panel count moves the value by more than the tolerance.
double bessel_kernel(const KernelParams& params, double r);

/// |d/dr G_s(r)| from the differentiated integrand. Zero at r = 0 when finite;
/// SingularityError at r = 0 otherwise.
double bessel_kernel_radial_derivative(const KernelParams& params, double r);

/// Surface measure of the unit sphere in R^d for d <= 3: 2, 2 pi, 4 pi.
double unit_sphere_area(int d);

/// omega_d int_0^inf r^{d-1} G_s(r) dr. Requires d <= 3.
double kernel_mass(const KernelParams& params);

/// omega_d int_0^inf r^{d-1} |d/dr G_2(r)| dr. Requires d <= 3.
double grad_kernel_l1(int d, const QuadratureSpec& quadrature = {});

struct KernelSample {
  double r = 0.0;
  double value = 0.0;
  double bound_ratio = 0.0;
};

/// G_s on a log-spaced grid over [1e-6, 2) against the local majorant
/// (1 + r^{s-d}, 1 + ln(2/r) or 1) followed by G_s e^{r/2} on [2, 40].
std::vector<KernelSample> kernel_sweep(const KernelParams& params);

/// Positivity, strict decrease and finite ratios over kernel_sweep().
/// Metrics "near_max_ratio" and "far_max_ratio". Requires d <= 3.
LemmaCheckReport check_kernel_bounds(const KernelParams& params);

/// |d/dr G_s(r)| / G_{s-1}(r / sqrt 2) on a log-spaced grid over [1e-6, 40].
/// Throws PreconditionError unless s > 1.
LemmaCheckReport check_grad_bound(const KernelParams& params);

void write_kernel_csv(std::ostream& os, const KernelParams& params, const std::vector<KernelSample>& samples);

}  // namespace ultrana
