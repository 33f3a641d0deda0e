#include "ultrana/combinatorics.hpp"

#include "ultrana/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ultrana {

LogMagnitude log_factorial(long n, Precision prec) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  if (n < 2) return LogMagnitude::one(prec);
  return LogMagnitude::from_log(lngamma(BigReal(n + 1, prec)));
}

std::vector<mpz_class> binomial_row(long n) {
  if (n < 0) throw DomainError("binomial row index must be nonnegative");
  std::vector<mpz_class> row(static_cast<std::size_t>(n) + 1);
  row[0] = 1;
  for (long k = 1; k <= n; ++k) {
    // binom(n,k) = binom(n,k-1) (n-k+1) / k, exact at every step.
    row[k] = row[k - 1] * (n - k + 1);
    row[k] /= k;
  }
  return row;
}

StirlingTable::StirlingTable(long nmax, long cap) {
  if (nmax < 0) throw DomainError("Stirling table size must be nonnegative");
  if (nmax > cap) {
    throw ResourceLimitError("Stirling table nmax " + std::to_string(nmax) + " exceeds cap " + std::to_string(cap));
  }
  rows_.reserve(static_cast<std::size_t>(nmax) + 1);
  StirlingRowCursor cursor;
  for (long n = 0; n <= nmax; ++n) {
    rows_.emplace_back(cursor.row().begin(), cursor.row().end());
    if (n < nmax) cursor.advance();
  }
}

const mpz_class& StirlingTable::operator()(long n, long k) const {
  static const mpz_class zero = 0;
  if (n < 0 || n > nmax()) throw IndexError("Stirling row out of range: " + std::to_string(n));
  if (k < 0 || k > n) return zero;
  return rows_[n][k];
}

std::span<const mpz_class> StirlingTable::row(long n) const {
  if (n < 0 || n > nmax()) throw IndexError("Stirling row out of range: " + std::to_string(n));
  return rows_[n];
}

StirlingTable stirling2_table(long nmax, long cap) { return StirlingTable(nmax, cap); }

StirlingRowCursor::StirlingRowCursor() : row_{1} {}

void StirlingRowCursor::advance() {
  const long next = n_ + 1;
  scratch_.assign(static_cast<std::size_t>(next) + 1, mpz_class(0));
  for (long k = 1; k <= next; ++k) {
    if (k <= n_) scratch_[k] = row_[k] * k;
    scratch_[k] += row_[k - 1];
  }
  row_.swap(scratch_);
  n_ = next;
}

namespace {

void check_positive(const BigReal& a) {
  if (!(a > 0L)) throw DomainError("Touchard argument must be positive");
}

double log_sum_exp_double(const std::vector<double>& xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace

std::vector<LogMagnitude> touchard_sequence(long nmax, const BigReal& a, long cap) {
  if (nmax < 0) throw DomainError("Touchard order must be nonnegative");
  check_positive(a);
  const Precision prec = a.precision();
  const long exact_top = std::min(nmax, std::max(cap, 0L));

  std::vector<BigReal> a_pow;
  a_pow.reserve(static_cast<std::size_t>(exact_top) + 1);
  a_pow.emplace_back(1L, prec);
  for (long k = 1; k <= exact_top; ++k) a_pow.push_back(a_pow.back() * a);

  std::vector<LogMagnitude> out;
  out.reserve(static_cast<std::size_t>(nmax) + 1);
  StirlingRowCursor cursor;
  BigReal term(prec);
  for (long n = 0; n <= exact_top; ++n) {
    BigReal sum(prec);
    const auto row = cursor.row();
    for (long k = 0; k <= n; ++k) {
      if (sgn(row[k]) == 0) continue;
      mpfr_set_z(term.get(), row[k].get_mpz_t(), MPFR_RNDN);
      term *= a_pow[k];
      sum += term;
    }
    out.push_back(LogMagnitude::from_value(sum));
    if (n < exact_top) cursor.advance();
  }
  if (nmax <= exact_top) return out;

  // Beyond the cap: positive recurrence with double log-space entries.
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(nmax) + 1);
  for (const auto& t : out) logs.push_back(t.log_abs_double());
  const double ln_a = log(a).to_double();
  std::vector<double> ln_fact(static_cast<std::size_t>(nmax) + 1);
  for (long k = 0; k <= nmax; ++k) ln_fact[k] = std::lgamma(static_cast<double>(k) + 1.0);
  std::vector<double> terms;
  for (long n = exact_top; n < nmax; ++n) {
    terms.resize(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) terms[k] = ln_fact[n] - ln_fact[k] - ln_fact[n - k] + logs[k];
    logs.push_back(ln_a + log_sum_exp_double(terms));
    out.push_back(LogMagnitude::from_log(BigReal(logs.back(), prec)));
  }
  return out;
}

LogMagnitude touchard(long n, const BigReal& a, long cap) { return touchard_sequence(n, a, cap).back(); }

LogMagnitude touchard_recurrence(long n, const BigReal& a) {
  if (n < 0) throw DomainError("Touchard order must be nonnegative");
  check_positive(a);
  const Precision prec = a.precision();
  const LogTables tables(std::max(n, 1L), prec);
  const BigReal ln_a = log(a);
  std::vector<BigReal> logs{BigReal(prec)};
  std::vector<BigReal> terms;
  for (long m = 0; m < n; ++m) {
    terms.clear();
    for (long k = 0; k <= m; ++k) terms.push_back(tables.ln_binomial(m, k) + logs[k]);
    logs.push_back(ln_a + log_sum_exp(terms).log_abs());
  }
  return LogMagnitude::from_log(logs[n]);
}

LogTables::LogTables(long nmax, Precision prec) : nmax_(nmax), prec_(prec) {
  if (nmax < 0) throw DomainError("table size must be nonnegative");
  const auto size = static_cast<std::size_t>(nmax) + 1;
  ln_factorial_.reserve(size);
  ln_shift_.reserve(size);
  ln_ln_shift_.reserve(size);
  const BigReal e = euler_e(prec);
  ln_factorial_.emplace_back(prec);
  ln_shift_.emplace_back(1L, prec);
  ln_ln_shift_.emplace_back(prec);
  for (long k = 1; k <= nmax; ++k) {
    ln_factorial_.push_back(ln_factorial_.back() + log(BigReal(k, prec)));
    ln_shift_.push_back(log(e + k));
    ln_ln_shift_.push_back(log(ln_shift_.back()));
  }
}

BigReal LogTables::ln_binomial(long n, long k) const {
  if (k < 0 || k > n) throw IndexError("binomial index out of range");
  return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
}

}  // namespace ultrana
