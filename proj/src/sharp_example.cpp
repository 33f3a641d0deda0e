#include "ultrana/sharp_example.hpp"

#include "ultrana/combinatorics.hpp"
#include "ultrana/errors.hpp"
#include "ultrana/majorant.hpp"
#include "ultrana/report.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <string>

namespace ultrana {

SharpExample::SharpExample(BigReal c0) : c0_(std::move(c0)) {
  if (!(c0_ > 0L)) throw DomainError("C0 must be positive");
  const Precision prec = c0_.precision();
  a_ = BigReal(1L, prec) / (c0_ * c0_ + 1L);
  period_ = pi(prec) * 2L / c0_;
}

BigComplex derivative_at_zero(const SharpExample& ex, long n) {
  if (n < 0) throw DomainError("derivative order must be nonnegative");
  const LogMagnitude magnitude = touchard(n, ex.a()) * LogMagnitude::from_value(ex.c0()).pow(n);
  return BigComplex::i_power(n, ex.precision()) * magnitude.to_big_real();
}

BigComplex derivative_at_zero_recurrence(const SharpExample& ex, long n) {
  if (n < 0) throw DomainError("derivative order must be nonnegative");
  const Precision prec = ex.precision();
  // phi^{(k)}(0) = A (i C0)^k
  std::vector<BigComplex> phi;
  phi.reserve(static_cast<std::size_t>(n) + 1);
  BigReal c0_pow(1L, prec);
  for (long k = 0; k <= n; ++k) {
    phi.push_back(BigComplex::i_power(k, prec) * (ex.a() * c0_pow));
    c0_pow *= ex.c0();
  }
  std::vector<BigComplex> u{BigComplex(BigReal(1L, prec), BigReal(prec))};
  for (long m = 0; m < n; ++m) {
    const std::vector<mpz_class> binom = binomial_row(m);
    BigComplex next(prec);
    for (long k = 0; k <= m; ++k) next += phi[k + 1] * u[m - k] * BigReal(binom[k].get_mpz_t(), prec);
    u.push_back(std::move(next));
  }
  return u[n];
}

namespace {

void check_grid(long n, long grid_size) {
  if (n < 0) throw DomainError("derivative order must be nonnegative");
  if (grid_size < 16) throw PreconditionError("grid needs at least 16 points");
}

std::vector<mpz_class> stirling_row(long n) {
  StirlingRowCursor cursor;
  while (cursor.n() < n) cursor.advance();
  return {cursor.row().begin(), cursor.row().end()};
}

struct GridPair {
  std::vector<BigComplex> closed;
  std::vector<BigComplex> leibniz;
};

GridPair evaluate_both(const SharpExample& ex, long n, long grid_size) {
  check_grid(n, grid_size);
  const Precision prec = ex.precision();
  const BigReal& a = ex.a();
  const BigReal two_pi = pi(prec) * 2L;

  // (i C0)^k for k = 0..n+1
  std::vector<BigComplex> ic0_pow;
  BigReal c0_pow(1L, prec);
  for (long k = 0; k <= n + 1; ++k) {
    ic0_pow.push_back(BigComplex::i_power(k, prec) * c0_pow);
    c0_pow *= ex.c0();
  }
  std::vector<std::vector<BigReal>> binom_rows;
  for (long m = 0; m < n; ++m) {
    std::vector<BigReal> row;
    for (const auto& b : binomial_row(m)) row.emplace_back(b.get_mpz_t(), prec);
    binom_rows.push_back(std::move(row));
  }
  // S(n,k) A^k
  std::vector<BigReal> weights;
  {
    const std::vector<mpz_class> row = stirling_row(n);
    BigReal a_pow(1L, prec);
    for (long k = 0; k <= n; ++k) {
      weights.push_back(BigReal(row[k].get_mpz_t(), prec) * a_pow);
      a_pow *= a;
    }
  }
  const BigReal e_minus_a = exp(-a);

  GridPair out;
  out.closed.reserve(static_cast<std::size_t>(grid_size));
  out.leibniz.reserve(static_cast<std::size_t>(grid_size));
  std::vector<BigComplex> u;
  for (long m = 0; m < grid_size; ++m) {
    const BigReal theta = two_pi * m / grid_size;
    const BigComplex w = BigComplex::polar(BigReal(1L, prec), theta);
    const BigComplex u0 = exp(w * a) * e_minus_a;

    // Closed form: e^{-A} e^{A w} (i C0)^n sum_k S(n,k) A^k w^k.
    BigComplex poly(prec);
    for (long k = n; k >= 0; --k) {
      poly *= w;
      poly += BigComplex(weights[k], BigReal(prec));
    }
    out.closed.push_back(u0 * ic0_pow[n] * poly);

    // u^{(j+1)} = sum_k binom(j,k) A (i C0)^{k+1} w u^{(j-k)}
    u.assign(1, u0);
    const BigComplex aw = w * a;
    for (long j = 0; j < n; ++j) {
      BigComplex acc(prec);
      for (long k = 0; k <= j; ++k) acc += ic0_pow[k + 1] * u[j - k] * binom_rows[j][k];
      u.push_back(aw * acc);
    }
    out.leibniz.push_back(u[n]);
  }
  return out;
}

BigReal disagreement(const GridPair& g) {
  const Precision prec = g.closed.front().precision();
  BigReal diff(prec);
  BigReal scale(prec);
  for (std::size_t m = 0; m < g.closed.size(); ++m) {
    diff = max(diff, (g.closed[m] - g.leibniz[m]).abs());
    scale = max(scale, g.closed[m].abs());
  }
  if (scale.is_zero()) return diff;
  return diff / scale;
}

// max over m >= 1 of e^{A(cos t_m - 1)} |sum_k p_k e^{i k t_m}|, t_m = 2 pi m / G,
// with p_k = S(n,k) A^k / T_n(A). The value at m = 0 is exactly 1.
double relative_profile_max(std::span<const mpz_class> row, const std::vector<BigReal>& a_pow,
                            const LogMagnitude& t_n, long grid_size) {
  const Precision prec = t_n.precision();
  const BigReal inv_t = BigReal(1L, prec) / t_n.to_big_real();
  struct Free {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };
  std::unique_ptr<fftw_complex[], Free> buf(fftw_alloc_complex(static_cast<std::size_t>(grid_size)));
  std::fill_n(&buf[0][0], 2 * grid_size, 0.0);
  BigReal w(prec);
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (sgn(row[k]) == 0) continue;
    mpfr_set_z(w.get(), row[k].get_mpz_t(), MPFR_RNDN);
    w *= a_pow[k];
    w *= inv_t;
    buf[k % static_cast<std::size_t>(grid_size)][0] += w.to_double();
  }
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(grid_size), buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const double a = a_pow.size() > 1 ? a_pow[1].to_double() : 0.0;
  double best = 0.0;
  for (long m = 1; m < grid_size; ++m) {
    const double t = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(grid_size);
    const double mag = std::exp(a * (std::cos(t) - 1.0)) * std::hypot(buf[m][0], buf[m][1]);
    best = std::max(best, mag);
  }
  return best;
}

// Grid max of |u^{(n)}| given the exact value at x = 0.
LogMagnitude grid_max(const LogMagnitude& at_zero, double profile_max) {
  if (profile_max <= 1.0) return at_zero;
  return at_zero * LogMagnitude::from_value(BigReal(profile_max, at_zero.precision()));
}

SupNormBracket make_bracket(const SharpExample& ex, long n, long grid_size, const LogMagnitude& m_n,
                            const LogMagnitude& m_next) {
  const Precision prec = ex.precision();
  const BigReal half_h = ex.period() / (2L * grid_size);
  const LogMagnitude slack = LogMagnitude::from_value(half_h * BigReal(kBracketSafetyFactor, prec)) * m_next;
  return SupNormBracket{n, m_n, m_n + slack, grid_size};
}

std::vector<BigReal> powers(const BigReal& a, long kmax) {
  std::vector<BigReal> out{BigReal(1L, a.precision())};
  for (long k = 1; k <= kmax; ++k) out.push_back(out.back() * a);
  return out;
}

}  // namespace

std::vector<BigComplex> derivative_on_grid(const SharpExample& ex, long n, long grid_size) {
  GridPair g = evaluate_both(ex, n, grid_size);
  const BigReal d = disagreement(g);
  if (d > BigReal(kGridAgreementTolerance, ex.precision())) {
    throw PrecisionError("grid evaluations disagree by " + d.to_string(6) + " at n=" + std::to_string(n));
  }
  return std::move(g.closed);
}

BigReal grid_method_disagreement(const SharpExample& ex, long n, long grid_size) {
  return disagreement(evaluate_both(ex, n, grid_size));
}

BigReal SupNormBracket::relative_width() const { return ((upper - lower) / lower).to_big_real(); }

std::vector<SupNormBracket> sup_norm_brackets(const SharpExample& ex, long nmax, long grid_size) {
  check_grid(nmax, grid_size);
  if (nmax + 1 > kStirlingTableCap) throw ResourceLimitError("bracket order beyond the Stirling cap");
  const std::vector<LogMagnitude> t = touchard_sequence(nmax + 1, ex.a());
  const std::vector<BigReal> a_pow = powers(ex.a(), nmax + 1);
  const LogMagnitude c0 = LogMagnitude::from_value(ex.c0());

  std::vector<LogMagnitude> maxima;
  StirlingRowCursor cursor;
  for (long n = 0; n <= nmax + 1; ++n) {
    const LogMagnitude at_zero = c0.pow(n) * t[n];
    maxima.push_back(grid_max(at_zero, relative_profile_max(cursor.row(), a_pow, t[n], grid_size)));
    if (n <= nmax) cursor.advance();
  }
  std::vector<SupNormBracket> out;
  for (long n = 0; n <= nmax; ++n) out.push_back(make_bracket(ex, n, grid_size, maxima[n], maxima[n + 1]));
  return out;
}

SupNormBracket sup_norm_bracket(const SharpExample& ex, long n, long grid_size) {
  check_grid(n, grid_size);
  if (n + 1 > kStirlingTableCap) throw ResourceLimitError("bracket order beyond the Stirling cap");
  const std::vector<LogMagnitude> t = touchard_sequence(n + 1, ex.a());
  const std::vector<BigReal> a_pow = powers(ex.a(), n + 1);
  const LogMagnitude c0 = LogMagnitude::from_value(ex.c0());
  StirlingRowCursor cursor;
  while (cursor.n() < n) cursor.advance();
  const LogMagnitude m_n = grid_max(c0.pow(n) * t[n], relative_profile_max(cursor.row(), a_pow, t[n], grid_size));
  cursor.advance();
  const LogMagnitude m_next =
      grid_max(c0.pow(n + 1) * t[n + 1], relative_profile_max(cursor.row(), a_pow, t[n + 1], grid_size));
  return make_bracket(ex, n, grid_size, m_n, m_next);
}

SupNormBracket sup_norm_bracket_refined(const SharpExample& ex, long n, long initial_grid, double target) {
  long grid = initial_grid;
  SupNormBracket b = sup_norm_bracket(ex, n, grid);
  while (b.relative_width() > BigReal(target, ex.precision()) && grid < kMaxSharpGrid) {
    grid = std::min(grid * 2, kMaxSharpGrid);
    b = sup_norm_bracket(ex, n, grid);
  }
  return b;
}

namespace {

// ln(n! r^{-n} e^{-A} e^{A e^{C0 r}})
BigReal log_cauchy(const SharpExample& ex, const BigReal& ln_n_fact, long n, const BigReal& r) {
  return ln_n_fact - log(r) * n - ex.a() + ex.a() * exp(ex.c0() * r);
}

}  // namespace

CauchyBound cauchy_bound(const SharpExample& ex, long n, const std::optional<BigReal>& r) {
  const Precision prec = ex.precision();
  BigReal radius(prec);
  if (r) {
    if (!(*r > 0L)) throw DomainError("radius must be positive");
    if (n < 0) throw DomainError("derivative order must be nonnegative");
    radius = r->with_precision(prec);
  } else {
    if (n < 3) throw PreconditionError("default radius needs n >= 3");
    const BigReal nn(n, prec);
    radius = log(nn / (ex.a() * log(nn))) / ex.c0();
    if (!(radius > 0L)) throw DomainError("default radius is not positive");
  }
  const BigReal ln_n_fact = log_factorial(n, prec).log_abs();
  BigReal at_r = log_cauchy(ex, ln_n_fact, n, radius);

  // The log bound is convex in r; golden-section search on a bracket that
  // straddles the stationary point n / r = A C0 e^{C0 r}.
  const BigReal nn(std::max(n, 1L), prec);
  BigReal hi = (log(nn / ex.a()) + 1L) / ex.c0();
  BigReal lo = min(hi, BigReal(1L, prec) / (ex.c0() * euler_e(prec))) / 2L;
  const BigReal inv_phi = (sqrt(BigReal(5L, prec)) - 1L) / 2L;
  BigReal x1 = hi - (hi - lo) * inv_phi;
  BigReal x2 = lo + (hi - lo) * inv_phi;
  BigReal f1 = log_cauchy(ex, ln_n_fact, n, x1);
  BigReal f2 = log_cauchy(ex, ln_n_fact, n, x2);
  for (int it = 0; it < prec.bits(); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - (hi - lo) * inv_phi;
      f1 = log_cauchy(ex, ln_n_fact, n, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + (hi - lo) * inv_phi;
      f2 = log_cauchy(ex, ln_n_fact, n, x2);
    }
  }
  BigReal r_min = f1 < f2 ? x1 : x2;
  BigReal at_min = min(f1, f2);
  if (at_r < at_min) {
    r_min = radius;
    at_min = at_r;
  }
  return CauchyBound{std::move(radius), LogMagnitude::from_log(std::move(at_r)), std::move(r_min),
                     LogMagnitude::from_log(std::move(at_min))};
}

namespace {

// Scans ln(C0^n T_n) - [n ln C + ln n! - lambda n ln ln(n+e)] for n = 0..nmax.
FalsificationResult scan(const SharpExample& ex, const BigReal& c, const BigReal& lambda, long nmax) {
  if (nmax < 0) throw DomainError("nmax must be nonnegative");
  const Precision prec = ex.precision();
  const std::vector<LogMagnitude> t = touchard_sequence(nmax, ex.a());
  const LogTables tables(nmax, prec);
  const BigReal ln_c0 = log(ex.c0());
  const BigReal ln_c = log(c.with_precision(prec));
  FalsificationResult out;
  out.nmax = nmax;
  std::optional<BigReal> best;
  for (long n = 0; n <= nmax; ++n) {
    BigReal ln_ratio = ln_c0 * n + t[n].log_abs();
    ln_ratio -= ln_c * n + tables.ln_factorial(n);
    ln_ratio += lambda * tables.ln_ln_shift(n) * n;
    if (ln_ratio.sign() > 0) {
      out.violating_n = n;
      out.ratio_n = n;
      out.lhs_over_rhs_at_n = exp(ln_ratio);
      return out;
    }
    if (!best || *best < ln_ratio) {
      best = ln_ratio;
      out.ratio_n = n;
    }
  }
  out.lhs_over_rhs_at_n = exp(*best);
  return out;
}

}  // namespace

FalsificationResult falsify_lambda(const SharpExample& ex, const BigReal& c, const BigReal& lambda, long nmax) {
  if (!(lambda >= 1L)) throw DomainError("lambda must be at least 1");
  if (!(c > 0L)) throw DomainError("C must be positive");
  FalsificationResult out = scan(ex, c, lambda, nmax);
  out.target = FalsificationTarget::lambda_bound;
  out.parameters = {{"C0", format_cell(ex.c0())}, {"C", format_cell(c)}, {"lambda", format_cell(lambda)}};
  return out;
}

FalsificationResult falsify_kappa(const SharpExample& ex, const BigReal& kappa, const BigReal& c, long nmax) {
  if (!(kappa > 0L) || !(kappa < 1L)) throw DomainError("kappa must lie in (0, 1)");
  if (!(c > 0L)) throw DomainError("C must be positive");
  const BigReal envelope = kappa * ex.c0() + c;
  FalsificationResult out = scan(ex, envelope, BigReal(1L, ex.precision()), nmax);
  out.target = FalsificationTarget::kappa_bound;
  out.parameters = {{"C0", format_cell(ex.c0())}, {"kappa", format_cell(kappa)}, {"C", format_cell(c)}};
  return out;
}

nlohmann::json to_json(const FalsificationResult& result) {
  nlohmann::json j;
  j["target"] = result.target == FalsificationTarget::lambda_bound ? "lambda_bound" : "kappa_bound";
  auto params = nlohmann::json::object();
  for (const auto& [key, value] : result.parameters) params[key] = value;
  j["parameters"] = params;
  j["nmax"] = result.nmax;
  j["violating_n"] = result.violating_n ? nlohmann::json(*result.violating_n) : nlohmann::json();
  j["lhs_over_rhs"] = format_cell(result.lhs_over_rhs_at_n);
  j["ratio_n"] = result.ratio_n;
  j["precision_bits"] = result.lhs_over_rhs_at_n.precision().bits();
  return j;
}

BigReal imaginary_axis_growth(const SharpExample& ex, const BigReal& y) {
  return exp(ex.a() * exp(-(ex.c0() * y)) - ex.a());
}

void write_sharp_csv(std::ostream& os, const SharpExample& ex, long nmax, const BigReal& kappa, const BigReal& k,
                     long grid_size) {
  const MajorantParams params(ex.c0(), kappa, k);
  const std::vector<SupNormBracket> brackets = sup_norm_brackets(ex, nmax, grid_size);
  os << "n,log_sup_lower,log_sup_upper,log_cauchy_bound,log_theorem_envelope,margin\n";
  for (long n = 3; n <= nmax; ++n) {
    const SupNormBracket& b = brackets[n];
    const BigReal envelope = closed_majorant(n, params.c()).log_abs();
    os << n << ',' << format_cell(b.lower.log_abs()) << ',' << format_cell(b.upper.log_abs()) << ','
       << format_cell(cauchy_bound(ex, n).minimized.log_abs()) << ',' << format_cell(envelope) << ','
       << format_cell(envelope - b.upper.log_abs()) << '\n';
  }
}

}  // namespace ultrana
