#pragma once

#include "ultrana/big_real.hpp"
#include "ultrana/log_magnitude.hpp"

#include <gmpxx.h>

#include <span>
#include <vector>

namespace ultrana {

inline constexpr long kStirlingTableCap = 2000;

/// n! as a log-space magnitude (log_abs = ln n!).
LogMagnitude log_factorial(long n, Precision prec);

/// Exact row binom(n, 0..n).
std::vector<mpz_class> binomial_row(long n);

/// Triangle of Stirling numbers of the second kind S(n,k), 0 <= k <= n <= nmax,
/// built exactly from S(n,k) = k S(n-1,k) + S(n-1,k-1).
class StirlingTable {
 public:
  explicit StirlingTable(long nmax, long cap = kStirlingTableCap);

  long nmax() const { return static_cast<long>(rows_.size()) - 1; }
  /// S(n,k); zero when k > n.
  const mpz_class& operator()(long n, long k) const;
  std::span<const mpz_class> row(long n) const;

 private:
  std::vector<std::vector<mpz_class>> rows_;
};

StirlingTable stirling2_table(long nmax, long cap = kStirlingTableCap);

/// Walks the Stirling triangle one row at a time, keeping only the current row.
/// Sweeps over n up to the table cap use this instead of a full StirlingTable,
/// whose memory grows like nmax^3 bits.
class StirlingRowCursor {
 public:
  StirlingRowCursor();

  long n() const { return n_; }
  std::span<const mpz_class> row() const { return row_; }
  void advance();

 private:
  long n_ = 0;
  std::vector<mpz_class> row_;
  std::vector<mpz_class> scratch_;
};

/// T_n(A) = sum_k S(n,k) A^k for A > 0.
///
/// Orders up to `cap` are evaluated from exact Stirling rows; beyond that the
/// all-positive recurrence T_{n+1} = A sum_k binom(n,k) T_k continues in
/// double-precision log space, seeded by the exact values.
LogMagnitude touchard(long n, const BigReal& a, long cap = kStirlingTableCap);

/// T_0(A), ..., T_nmax(A) using the same two-regime strategy as touchard().
std::vector<LogMagnitude> touchard_sequence(long nmax, const BigReal& a, long cap = kStirlingTableCap);

/// T_n(A) from the positive recurrence carried out entirely at the precision
/// of A (O(n^2) log-space terms). Independent of the Stirling route.
LogMagnitude touchard_recurrence(long n, const BigReal& a);

/// ln k!, ln(k+e) and ln ln(k+e) for k = 0..nmax, shared by the sweeps that
/// need many of them.
class LogTables {
 public:
  LogTables(long nmax, Precision prec);

  long nmax() const { return nmax_; }
  Precision precision() const { return prec_; }

  const BigReal& ln_factorial(long k) const { return ln_factorial_.at(static_cast<std::size_t>(k)); }
  /// ln(k + e)
  const BigReal& ln_shift(long k) const { return ln_shift_.at(static_cast<std::size_t>(k)); }
  /// ln ln(k + e)
  const BigReal& ln_ln_shift(long k) const { return ln_ln_shift_.at(static_cast<std::size_t>(k)); }
  /// ln binom(n, k)
  BigReal ln_binomial(long n, long k) const;

 private:
  long nmax_;
  Precision prec_;
  std::vector<BigReal> ln_factorial_;
  std::vector<BigReal> ln_shift_;
  std::vector<BigReal> ln_ln_shift_;
};

}  // namespace ultrana
