#include "ultrana/holder.hpp"

#include "ultrana/combinatorics.hpp"
#include "ultrana/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ultrana {

namespace {

using cplx = std::complex<double>;

cplx i_power(long k) {
  static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[k % 4];
}

double grid_max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double seminorm_on_grid(double c0, const std::vector<cplx>& values) {
  const std::vector<double> x = period_grid(c0, static_cast<long>(values.size()));
  return holder_seminorm(x, values).seminorm;
}

std::vector<cplx> coefficient_samples(double c0, long beta, long grid_size) {
  const double a = 1.0 / (1.0 + c0 * c0);
  const cplx scale = a * std::pow(c0, static_cast<double>(beta + 1)) * i_power(beta + 1);
  std::vector<cplx> out;
  for (double x : period_grid(c0, grid_size)) out.push_back(scale * std::polar(1.0, c0 * x));
  return out;
}

}  // namespace

HolderEstimate holder_seminorm(std::span<const double> points, std::span<const cplx> values, double delta,
                               double max_separation) {
  if (points.size() != values.size()) throw PreconditionError("points and values differ in length");
  if (points.size() < 2) throw PreconditionError("need at least 2 samples");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  HolderEstimate out;
  out.delta = delta;
  out.grid_size = static_cast<long>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double sep = std::abs(points[i] - points[j]);
      if (sep == 0.0 || sep > max_separation) continue;
      const double q = std::abs(values[i] - values[j]) / std::pow(sep, delta);
      out.seminorm = std::max(out.seminorm, q);
      out.short_range_cap = std::max(out.short_range_cap, sep);
    }
  }
  return out;
}

std::vector<double> period_grid(double c0, long grid_size) {
  if (!(c0 > 0.0)) throw DomainError("C0 must be positive");
  if (grid_size < 2) throw PreconditionError("grid needs at least 2 points");
  const double period = 2.0 * M_PI / c0;
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(grid_size));
  for (long m = 0; m < grid_size; ++m) x.push_back(period * static_cast<double>(m) / static_cast<double>(grid_size));
  return x;
}

std::vector<cplx> sharp_derivative_samples(double c0, long k, long grid_size) {
  if (k < 0) throw DomainError("derivative order must be nonnegative");
  const double a = 1.0 / (1.0 + c0 * c0);
  StirlingRowCursor cursor;
  while (cursor.n() < k) cursor.advance();
  std::vector<double> weights;
  for (long j = 0; j <= k; ++j) weights.push_back(cursor.row()[j].get_d() * std::pow(a, static_cast<double>(j)));
  const cplx prefactor = std::exp(-a) * std::pow(c0, static_cast<double>(k)) * i_power(k);
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(grid_size));
  for (double x : period_grid(c0, grid_size)) {
    const cplx w = std::polar(1.0, c0 * x);
    cplx poly = 0.0;
    for (long j = k; j >= 0; --j) poly = poly * w + weights[j];
    out.push_back(prefactor * std::exp(a * w) * poly);
  }
  return out;
}

std::vector<HolderRow> coeff_holder_rows(double c0, long beta_max, long grid_size) {
  if (beta_max < 1) throw PreconditionError("beta_max must be at least 1");
  std::vector<HolderRow> rows;
  for (long beta = 0; beta <= beta_max; ++beta) {
    const double estimate = seminorm_on_grid(c0, coefficient_samples(c0, beta, grid_size));
    const double bound = std::pow(c0, static_cast<double>(beta) + kHolderDelta);
    rows.push_back({beta, estimate, bound, estimate / bound});
  }
  return rows;
}

LemmaCheckReport check_coeff_holder(double c0, long beta_max, long grid_size) {
  const std::vector<HolderRow> rows = coeff_holder_rows(c0, beta_max, grid_size);
  LemmaCheckReport report;
  report.lemma_id = "coeff_holder";
  const Precision prec(64);
  const double ref = rows.front().ratio;
  double spread = 0.0;
  for (const auto& r : rows) {
    const double dev = std::abs(r.ratio - ref) / ref;
    spread = std::max(spread, dev);
    const bool ok = std::isfinite(r.ratio) && dev <= kBetaIndependenceTolerance;
    if (!ok) report.violations.emplace_back(r.k_or_beta, 0);
    report.n_grid.push_back(r.k_or_beta);
    report.rows.push_back(CheckRow{r.k_or_beta, 0, BigReal(r.ratio, prec), ok});
  }
  // Grid spacing h underestimates the seminorm by at most h^{1/2} sup|f'|;
  // sup |D^{beta+1} W| = A C0^{beta+2}, so relative to C0^{beta+1/2} this is A C0^{3/2} h^{1/2}.
  const double h = 2.0 * M_PI / c0 / static_cast<double>(grid_size);
  const double a = 1.0 / (1.0 + c0 * c0);
  report.worst_ratio = BigReal(ref, prec);
  report.set_metric("ratio", BigReal(ref, prec));
  report.set_metric("ratio_spread", BigReal(spread, prec));
  report.set_metric("max_grid_correction", BigReal(a * std::pow(c0, 1.5) * std::sqrt(h), prec));
  return report;
}

std::vector<HolderRow> mollifier_rows(double c0, long kmax, long grid_size) {
  if (kmax < 1) throw PreconditionError("kmax must be at least 1");
  std::vector<double> seminorms;
  std::vector<double> sups;
  for (long k = 0; k <= kmax; ++k) {
    const std::vector<cplx> samples = sharp_derivative_samples(c0, k, grid_size);
    seminorms.push_back(seminorm_on_grid(c0, samples));
    sups.push_back(grid_max_abs(samples));
  }
  std::vector<HolderRow> rows;
  for (long k = 1; k <= kmax; ++k) {
    const double bound = std::sqrt(seminorms[k] * seminorms[k - 1]);
    rows.push_back({k, sups[k], bound, sups[k] / bound});
  }
  return rows;
}

LemmaCheckReport check_mollifier_interpolation(double c0, long kmax, long grid_size) {
  LemmaCheckReport report;
  report.lemma_id = "mollifier_interpolation";
  const Precision prec(64);
  double fitted[2] = {0.0, 0.0};
  bool finite = true;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& r : mollifier_rows(c0, kmax, grid_size << pass)) {
      const bool ok = std::isfinite(r.ratio);
      finite = finite && ok;
      if (!ok) report.violations.emplace_back(r.k_or_beta, pass);
      fitted[pass] = std::max(fitted[pass], r.ratio);
      if (pass == 0) report.n_grid.push_back(r.k_or_beta);
      report.rows.push_back(CheckRow{r.k_or_beta, pass, BigReal(r.ratio, prec), ok});
    }
  }
  const double change = std::abs(fitted[1] - fitted[0]) / fitted[0];
  if (finite && !(change <= kMollifierStability)) report.violations.emplace_back(0, -1);
  report.worst_ratio = BigReal(fitted[0], prec);
  report.set_metric("fitted_c", BigReal(fitted[0], prec));
  report.set_metric("fitted_c_doubled", BigReal(fitted[1], prec));
  report.set_metric("relative_change", BigReal(change, prec));
  report.notes.push_back("rows: j_or_s = 0 on the base grid, 1 on the doubled grid");
  return report;
}

void write_holder_csv(std::ostream& os, const std::vector<HolderRow>& rows) {
  os << "k_or_beta,estimate,bound,ratio\n";
  for (const auto& r : rows) {
    os << r.k_or_beta << ',' << format_cell(r.estimate) << ',' << format_cell(r.bound) << ',' << format_cell(r.ratio)
       << '\n';
  }
}

}  // namespace ultrana
