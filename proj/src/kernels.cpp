#include "ultrana/kernels.hpp"

#include "ultrana/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ultrana {

namespace {

using boost::math::quadrature::gauss_kronrod;

// ln of the integrand of int_0^inf e^{-t - q/t} t^a dt/t after t = e^v.
struct LogIntegrand {
  double a;
  double q;
  double operator()(double v) const { return -std::exp(v) - q * std::exp(-v) + a * v; }
};

double integrate_panels(const LogIntegrand& f, double peak_log, double lo, double hi, const QuadratureSpec& quad) {
  const auto g = [&](double v) { return std::exp(f(v) - peak_log); };
  const double width = (hi - lo) / quad.panels;
  double sum = 0.0;
  for (int p = 0; p < quad.panels; ++p) {
    const double a = lo + p * width;
    const double b = p + 1 == quad.panels ? hi : a + width;
    sum += gauss_kronrod<double, 31>::integrate(g, a, b, 12, quad.tolerance);
  }
  return sum;
}

// Walks outward from the peak until the integrand is negligible.
double tail_limit(const LogIntegrand& f, double v_peak, double peak_log, double direction, double drop) {
  double step = 1.0;
  double v = v_peak;
  while (f(v) - peak_log > -drop) {
    v += direction * step;
    step *= 2.0;
    if (step > 1e6) throw ToleranceError("integrand tail does not decay");
  }
  return v;
}

// int_0^inf e^{-t - r^2/(4t)} t^a dt/t
double subordination_integral(double a, double r, const QuadratureSpec& quad) {
  const double q = r * r / 4.0;
  // Positive root of x^2 - a x - q = 0, in the form without cancellation.
  const double root = std::sqrt(a * a + r * r);
  const double x_peak = a >= 0.0 ? (a + root) / 2.0 : r * r / (2.0 * (root - a));
  if (!(x_peak > 0.0)) throw SingularityError("kernel integral diverges at r = 0 when s <= d");
  const LogIntegrand f{a, q};
  const double v_peak = std::log(x_peak);
  const double peak_log = f(v_peak);
  const double drop = std::log(1.0 / quad.tolerance) + 25.0;
  const double lo = tail_limit(f, v_peak, peak_log, -1.0, drop);
  const double hi = tail_limit(f, v_peak, peak_log, 1.0, drop);

  const double coarse = integrate_panels(f, peak_log, lo, hi, quad);
  QuadratureSpec fine = quad;
  fine.panels *= 2;
  const double refined = integrate_panels(f, peak_log, lo, hi, fine);
  if (std::abs(coarse - refined) > quad.tolerance * std::abs(refined)) {
    throw ToleranceError("panel doubling moved the kernel integral by " +
                         std::to_string(std::abs(coarse - refined) / std::abs(refined)));
  }
  return refined * std::exp(peak_log);
}

double normalization(double s, int d) { return std::pow(2.0 * std::sqrt(M_PI), -d) / std::tgamma(s / 2.0); }

std::vector<double> log_spaced(double lo, double hi, int count, bool include_hi) {
  std::vector<double> out;
  const int steps = include_hi ? count - 1 : count;
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / steps));
  return out;
}

double local_majorant(double s, int d, double r) {
  if (s < d) return 1.0 + std::pow(r, s - d);
  if (s == d) return 1.0 + std::log(2.0 / r);
  return 1.0;
}

void require_low_dim(int d) {
  if (d > 3) throw DomainError("radial quadrature is implemented for d <= 3");
}

// omega_d int r^{d-1} f(r) dr with r = e^u over [e^{-40/decay}, 80], where
// r^d f(r) = O(r^decay) as r -> 0 so the dropped piece is O(e^-40).
template <class F>
double radial_integral(int d, double decay, F f, const QuadratureSpec& quad) {
  const auto g = [&](double u) {
    const double r = std::exp(u);
    return std::pow(r, d) * f(r);
  };
  const double lo = -40.0 / std::min(1.0, decay);
  const double hi = std::log(80.0);
  const int panels = static_cast<int>(std::ceil(64.0 * (hi - lo) / (40.0 + hi)));
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + (hi - lo) * p / panels;
    const double b = lo + (hi - lo) * (p + 1) / panels;
    sum += gauss_kronrod<double, 31>::integrate(g, a, b, 10, quad.tolerance);
  }
  return unit_sphere_area(d) * sum;
}

}  // namespace

void validate(const KernelParams& params) {
  if (!(params.s > 0.0)) throw DomainError("s must be positive");
  if (params.d < 1) throw DomainError("d must be at least 1");
  if (!(params.quadrature.tolerance > 0.0) || params.quadrature.panels < 1) {
    throw DomainError("quadrature needs positive tolerance and panel count");
  }
}

double bessel_kernel(const KernelParams& params, double r) {
  validate(params);
  if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
  const double a = (params.s - params.d) / 2.0;
  return normalization(params.s, params.d) * subordination_integral(a, r, params.quadrature);
}

double bessel_kernel_radial_derivative(const KernelParams& params, double r) {
  validate(params);
  if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
  const double a = (params.s - params.d) / 2.0 - 1.0;
  if (r == 0.0) {
    if (a > 0.0) return 0.0;
    throw SingularityError("kernel gradient is singular at the origin");
  }
  // d/dr e^{-r^2/(4t)} = -(r / 2t) e^{-r^2/(4t)}
  return normalization(params.s, params.d) * (r / 2.0) * subordination_integral(a, r, params.quadrature);
}

double unit_sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: throw DomainError("sphere area implemented for d <= 3");
  }
}

double kernel_mass(const KernelParams& params) {
  validate(params);
  require_low_dim(params.d);
  return radial_integral(params.d, std::min(params.s, static_cast<double>(params.d)), [&](double r) { return bessel_kernel(params, r); }, params.quadrature);
}

double grad_kernel_l1(int d, const QuadratureSpec& quadrature) {
  require_low_dim(d);
  const KernelParams params{2.0, d, quadrature};
  return radial_integral(d, 1.0, [&](double r) { return bessel_kernel_radial_derivative(params, r); }, quadrature);
}

std::vector<KernelSample> kernel_sweep(const KernelParams& params) {
  validate(params);
  std::vector<KernelSample> out;
  for (double r : log_spaced(1e-6, 2.0, 48, false)) {
    const double g = bessel_kernel(params, r);
    out.push_back({r, g, g / local_majorant(params.s, params.d, r)});
  }
  for (double r : log_spaced(2.0, 40.0, 40, true)) {
    const double g = bessel_kernel(params, r);
    out.push_back({r, g, g * std::exp(r / 2.0)});
  }
  return out;
}

LemmaCheckReport check_kernel_bounds(const KernelParams& params) {
  require_low_dim(params.d);
  const std::vector<KernelSample> samples = kernel_sweep(params);
  LemmaCheckReport report;
  report.lemma_id = "kernel_bounds";
  const Precision prec(64);
  double near_max = 0.0;
  double far_max = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const KernelSample& k = samples[i];
    const bool far = k.r >= 2.0;
    bool ok = std::isfinite(k.bound_ratio) && k.value > 0.0;
    if (i > 0 && !(k.value < samples[i - 1].value)) ok = false;
    (far ? far_max : near_max) = std::max(far ? far_max : near_max, k.bound_ratio);
    const long idx = static_cast<long>(i);
    report.n_grid.push_back(idx);
    if (!ok) report.violations.emplace_back(idx, far ? 1 : 0);
    report.rows.push_back(CheckRow{idx, far ? 1 : 0, BigReal(k.bound_ratio, prec), ok});
  }
  report.worst_ratio = BigReal(std::max(near_max, far_max), prec);
  report.set_metric("near_max_ratio", BigReal(near_max, prec));
  report.set_metric("far_max_ratio", BigReal(far_max, prec));
  report.notes.push_back("rows: n = grid index, j_or_s = 0 near origin, 1 decay range");
  return report;
}

LemmaCheckReport check_grad_bound(const KernelParams& params) {
  validate(params);
  if (!(params.s > 1.0)) throw PreconditionError("gradient bound needs s > 1");
  KernelParams lower = params;
  lower.s = params.s - 1.0;
  LemmaCheckReport report;
  report.lemma_id = "kernel_gradient";
  const Precision prec(64);
  double worst = 0.0;
  long idx = 0;
  for (double r : log_spaced(1e-6, 40.0, 80, true)) {
    const double ratio = bessel_kernel_radial_derivative(params, r) / bessel_kernel(lower, r / std::sqrt(2.0));
    const bool ok = std::isfinite(ratio);
    if (!ok) report.violations.emplace_back(idx, 0);
    worst = std::max(worst, ratio);
    report.n_grid.push_back(idx);
    report.rows.push_back(CheckRow{idx, 0, BigReal(ratio, prec), ok});
    ++idx;
  }
  report.worst_ratio = BigReal(worst, prec);
  report.set_metric("first_ratio", report.rows.front().ratio);
  report.set_metric("last_ratio", report.rows.back().ratio);
  return report;
}

void write_kernel_csv(std::ostream& os, const KernelParams& params, const std::vector<KernelSample>& samples) {
  os << "s,d,r,G_value,bound_ratio\n";
  for (const auto& k : samples) {
    os << format_cell(params.s) << ',' << params.d << ',' << format_cell(k.r) << ',' << format_cell(k.value) << ','
       << format_cell(k.bound_ratio) << '\n';
  }
}

}  // namespace ultrana
