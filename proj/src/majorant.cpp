#include "ultrana/majorant.hpp"

#include "ultrana/errors.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <string>

namespace ultrana {

namespace {

BigReal ln_ln_shift(long j, Precision prec) {
  if (j == 0) return BigReal(prec);
  return log(log(euler_e(prec) + j));
}

// ln a_j
BigReal log_split_weight(long n, long j, const LogTables& t) { return -t.ln_factorial(n - j) - t.ln_ln_shift(j) * j; }

Precision wider(const BigReal& a, const BigReal& b) { return a.precision() < b.precision() ? b.precision() : a.precision(); }

long round_nearest(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_round(r.get(), x.get());
  return mpfr_get_si(r.get(), MPFR_RNDN);
}

long ceil_long(const BigReal& x) { return -floor(-x).to_long_floor(); }

}  // namespace

SplitWeight split_weight(long n, long j, Precision prec) {
  if (n < 0 || j < 0 || j > n) {
    throw IndexError("split index out of range: n=" + std::to_string(n) + " j=" + std::to_string(j));
  }
  const long l = n - j;
  BigReal ln_value = -log_factorial(l, prec).log_abs() - ln_ln_shift(j, prec) * j;
  return SplitWeight{n, j, l, LogMagnitude::from_log(std::move(ln_value))};
}

BigReal kappa_factor(const BigReal& kappa) {
  if (!(kappa > 1L)) throw DomainError("kappa must exceed 1");
  return BigReal(1L, kappa.precision()) / log(kappa) + 1L;
}

MajorantParams::MajorantParams(BigReal c0, BigReal kappa, BigReal k)
    : c0_(std::move(c0)), kappa_(std::move(kappa)), k_(std::move(k)) {
  if (!(c0_ > 0L)) throw DomainError("C0 must be positive");
  if (!(k_ >= 0L)) throw DomainError("K must be nonnegative");
  kappa_factor_ = ultrana::kappa_factor(kappa_);
  c_ = kappa_ * c0_ + k_ * kappa_factor_;
}

LogMagnitude closed_majorant(long n, const BigReal& c) {
  if (n < 0) throw DomainError("order must be nonnegative");
  if (!(c > 0L)) throw DomainError("C must be positive");
  const Precision prec = c.precision();
  if (n == 0) return LogMagnitude::one(prec);
  BigReal ln_value = log(c) * n + log_factorial(n, prec).log_abs() - ln_ln_shift(n, prec) * n;
  return LogMagnitude::from_log(std::move(ln_value));
}

LogMagnitude convolution_sum(long n, const BigReal& c0, const BigReal& c) {
  return convolution_sum(n, c0, c, LogTables(n, wider(c0, c)));
}

LogMagnitude convolution_sum(long n, const BigReal& c0, const BigReal& c, const LogTables& tables) {
  if (n < 0) throw DomainError("order must be nonnegative");
  if (!(c0 > 0L) || !(c > 0L)) throw DomainError("C0 and C must be positive");
  if (tables.nmax() < n) throw IndexError("log tables too short for n=" + std::to_string(n));
  const BigReal ln_c0 = log(c0.with_precision(tables.precision()));
  const BigReal ln_c = log(c.with_precision(tables.precision()));
  std::vector<BigReal> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) {
    BigReal t = ln_c0 * (n - j);
    t += ln_c * j;
    t += log_split_weight(n, j, tables);
    terms.push_back(std::move(t));
  }
  return log_sum_exp(terms);
}

BigReal bootstrap_ratio(long n, const MajorantParams& params) {
  const LogTables tables(n + 1, params.precision());
  return bootstrap_ratio(n, params.c0(), params.kappa(), params.c(), tables);
}

BigReal bootstrap_ratio(long n, const BigReal& c0, const BigReal& kappa, const BigReal& c, const LogTables& tables) {
  if (c < kappa * c0) throw PreconditionError("bootstrap ratio requires C >= kappa C0");
  if (tables.nmax() < n + 1) throw IndexError("log tables too short for n=" + std::to_string(n));
  const LogMagnitude sum = convolution_sum(n, c0, c, tables);
  BigReal ln_den = log(kappa_factor(kappa.with_precision(tables.precision())));
  ln_den += log(BigReal(n + 1, tables.precision()));
  ln_den += log(c.with_precision(tables.precision())) * n;
  ln_den -= tables.ln_ln_shift(n + 1) * (n + 1);
  return exp(sum.log_abs() - ln_den);
}

std::vector<long> geometric_grid(long nmin, long nmax) {
  std::vector<long> grid;
  for (unsigned k = 0;; ++k) {
    // ceil(sqrt(2^k)) computed exactly.
    mpz_class pow2 = 1;
    pow2 <<= k;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), pow2.get_mpz_t());
    if (root * root != pow2) root += 1;
    if (!root.fits_slong_p() || root.get_si() > nmax) break;
    const long v = root.get_si();
    if (v >= nmin) grid.push_back(v);
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

LemmaCheckReport bootstrap_sweep(const MajorantParams& params, const std::vector<long>& grid, const LogTables& tables) {
  LemmaCheckReport report;
  report.lemma_id = "bootstrap";
  report.n_grid = grid;
  report.worst_ratio = BigReal(tables.precision());
  for (long n : grid) {
    BigReal r = bootstrap_ratio(n, params.c0(), params.kappa(), params.c(), tables);
    const bool ok = r.is_finite() && r > 0L;
    if (!ok) report.violations.emplace_back(n, 0);
    if (report.worst_ratio < r) report.worst_ratio = r;
    report.rows.push_back(CheckRow{n, 0, std::move(r), ok});
  }
  report.set_metric("K1", report.worst_ratio);
  return report;
}

LemmaCheckReport check_monotonicity(long n, Precision prec) { return check_monotonicity(n, LogTables(n, prec)); }

LemmaCheckReport check_monotonicity(long n, const LogTables& tables) {
  if (n < 3) throw PreconditionError("monotonicity check needs n >= 3");
  if (tables.nmax() < n) throw IndexError("log tables too short for n=" + std::to_string(n));
  const Precision prec = tables.precision();
  const BigReal ln_n = log(BigReal(n, prec));
  const long inc_lo = n / 2 + 1;  // strict n/2 < j
  const long inc_hi = floor(BigReal(n, prec) - ln_n - 2L).to_long_floor();
  const long dec_lo = std::max(ceil_long(BigReal(n, prec) - ln_n + 1L), 0L);
  const long dec_hi = n - 1;

  LemmaCheckReport report;
  report.lemma_id = "monotonicity";
  report.n_grid = {n};
  if (n % 2 == 0) report.notes.push_back("j = n/2 excluded from the increasing range (strict inequality)");

  // step(j) = ln a_{j+1} - ln a_j = ln(n-j) - (j+1) ln ln(j+1+e) + j ln ln(j+e)
  auto step = [&](long j) {
    BigReal d = tables.ln_factorial(n - j) - tables.ln_factorial(n - j - 1);
    d -= tables.ln_ln_shift(j + 1) * (j + 1);
    d += tables.ln_ln_shift(j) * j;
    return d;
  };

  std::optional<BigReal> worst_log;  // max over checked pairs of ln(violating ratio)
  long worst_j = -1;
  auto record = [&](long j, BigReal log_ratio) {
    if (log_ratio.sign() > 0) report.violations.emplace_back(n, j);
    if (!worst_log || *worst_log < log_ratio) {
      worst_log = std::move(log_ratio);
      worst_j = j;
    }
  };
  for (long j = inc_lo; j <= inc_hi; ++j) record(j, -step(j));  // a_j / a_{j+1}
  for (long j = dec_lo; j <= dec_hi; ++j) record(j, step(j));   // a_{j+1} / a_j

  report.worst_ratio = worst_log ? exp(*worst_log) : BigReal(prec);
  report.rows.push_back(CheckRow{n, worst_j, report.worst_ratio, report.passed()});
  if (!worst_log) report.notes.push_back("both ranges empty; vacuous pass");
  return report;
}

std::optional<long> monotonicity_threshold(long scan_from, long scan_to, const LogTables& tables) {
  std::optional<long> threshold;
  for (long n = scan_to; n >= std::max(scan_from, 3L); --n) {
    if (!check_monotonicity(n, tables).passed()) break;
    threshold = n;
  }
  return threshold;
}

long gaussian_window_offset(long n) {
  const Precision prec(128);
  const BigReal ln_n = log(BigReal(n, prec));
  return floor(pow(ln_n, BigReal(2L, prec) / 3L)).to_long_floor();
}

BigReal check_aj_gaussian(long n, long s, Precision prec) {
  if (n < 2) throw PreconditionError("Gaussian window needs n >= 2");
  const BigReal ln_n = log(BigReal(n, prec));
  const BigReal two_thirds = BigReal(2L, prec) / 3L;
  if (BigReal(std::labs(s), prec) > pow(ln_n, two_thirds) * 2L) {
    throw PreconditionError("|s| exceeds 2 (ln n)^{2/3}");
  }
  const long j = n - round_nearest(ln_n) + s;
  if (j < 0 || j > n) throw RangeError("j = n - round(ln n) + s lies outside [0, n]");
  const SplitWeight a = split_weight(n, j, prec);
  BigReal ln_ref = ln_n - log(ln_n) * (BigReal(n, prec) + BigReal(0.5, prec));
  ln_ref -= BigReal(3L * s * s, prec) / (ln_n * 2L);
  return exp(a.value.log_abs() - ln_ref);
}

BigReal check_aj_supergaussian(long n, const BigReal& big_l) {
  if (!(big_l > 1L)) throw PreconditionError("super-Gaussian window needs L > 1");
  if (n < 2) throw PreconditionError("super-Gaussian window needs n >= 2");
  const Precision prec = big_l.precision();
  const BigReal ln_n = log(BigReal(n, prec));
  const long j = n - round_nearest(big_l * ln_n);
  if (j < 0) throw RangeError("j = n - round(L ln n) is negative");
  const SplitWeight a = split_weight(n, j, prec);
  const BigReal exponent = big_l * (log(big_l) - 1L);  // L ln(L/e)
  BigReal ln_ref = -exponent * ln_n - log(ln_n) * (BigReal(n, prec) + BigReal(0.5, prec));
  return exp(a.value.log_abs() - ln_ref);
}

BigReal dn_value(long n, Precision prec) {
  const BigReal e = euler_e(prec);
  const BigReal l0 = log(e + n);
  const BigReal l1 = log(e + (n + 1));
  BigReal ratio = l1 / l0;
  BigReal powered(prec);
  mpfr_pow_ui(powered.get(), ratio.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  return l1 / (n + 1) * powered;
}

LemmaCheckReport check_dn(long nmax, Precision prec) {
  if (nmax < 2) throw PreconditionError("d_n sweep needs nmax >= 2");
  LemmaCheckReport report;
  report.lemma_id = "dn_bound";
  report.worst_ratio = BigReal(prec);
  BigReal tail_max(prec);
  const std::vector<long> sample = geometric_grid(2, nmax);
  auto next_sample = sample.begin();

  const BigReal e = euler_e(prec);
  BigReal l_cur = log(e + 2L);
  BigReal l_next(prec);
  BigReal ratio(prec);
  BigReal d(prec);
  for (long n = 2; n <= nmax; ++n) {
    l_next = log(e + (n + 1));
    ratio = l_next / l_cur;
    mpfr_pow_ui(d.get(), ratio.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    d *= l_next;
    d /= (n + 1);
    const bool ok = d < 6L;
    if (!ok) report.violations.emplace_back(n, 0);
    if (report.worst_ratio < d) report.worst_ratio = d;
    if (n >= 10 && tail_max < d) tail_max = d;
    if (next_sample != sample.end() && *next_sample == n) {
      report.n_grid.push_back(n);
      report.rows.push_back(CheckRow{n, 0, d, ok});
      ++next_sample;
    }
    std::swap(l_cur, l_next);
  }
  report.set_metric("max_dn", report.worst_ratio);
  report.set_metric("max_dn_from_10", tail_max);
  return report;
}

LogShiftSweep check_log_shift(long nmax, Precision prec) {
  if (nmax < 2) throw PreconditionError("log-shift sweep needs nmax >= 2");
  // ring[m % 11] = ln m for m in [n, n+10]
  std::vector<BigReal> ring(11, BigReal(prec));
  for (long m = 2; m <= 12; ++m) ring[m % 11] = log(BigReal(m, prec));
  LogShiftSweep out{BigReal(prec), 2, BigReal(prec)};
  BigReal ratio(prec);
  BigReal value(prec);
  for (long n = 2; n <= nmax; ++n) {
    if (n > 2) ring[(n + 10) % 11] = log(BigReal(n + 10, prec));
    ratio = ring[(n + 10) % 11] / ring[n % 11];
    mpfr_pow_ui(value.get(), ratio.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    if (out.sup < value) {
      out.sup = value;
      out.arg_sup = n;
    }
    if (n == nmax) out.at_nmax = value;
  }
  return out;
}

}  // namespace ultrana
