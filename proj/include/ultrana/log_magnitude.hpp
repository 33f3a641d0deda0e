#pragma once

#include "ultrana/big_real.hpp"

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace ultrana {

enum class Sign { negative = -1, zero = 0, positive = 1 };

/// Signed scalar stored as (sign, ln|x|). Products and quotients only touch
/// the exponent field, so values like 100000! or C^n ln^{-n}(n+e) stay
/// representable at any size.
class LogMagnitude {
 public:
  /// Zero at the given precision.
  explicit LogMagnitude(Precision prec = Precision());

  static LogMagnitude zero(Precision prec) { return LogMagnitude(prec); }
  static LogMagnitude one(Precision prec);
  /// Positive value e^{log_abs}.
  static LogMagnitude from_log(BigReal log_abs, Sign sign = Sign::positive);
  static LogMagnitude from_value(const BigReal& value);

  Sign sign() const { return sign_; }
  bool is_zero() const { return sign_ == Sign::zero; }
  bool is_positive() const { return sign_ == Sign::positive; }
  Precision precision() const { return log_abs_.precision(); }

  /// ln|x|. Undefined (throws DomainError) for zero.
  const BigReal& log_abs() const;
  /// Converts back to a plain BigReal; MPFR's exponent range covers every
  /// magnitude this library produces.
  BigReal to_big_real() const;
  double log_abs_double() const;

  LogMagnitude& operator*=(const LogMagnitude& rhs);
  LogMagnitude& operator/=(const LogMagnitude& rhs);
  LogMagnitude& operator+=(const LogMagnitude& rhs);
  LogMagnitude& operator-=(const LogMagnitude& rhs);
  LogMagnitude operator-() const;

  friend LogMagnitude operator*(LogMagnitude a, const LogMagnitude& b) { return a *= b; }
  friend LogMagnitude operator/(LogMagnitude a, const LogMagnitude& b) { return a /= b; }
  friend LogMagnitude operator+(LogMagnitude a, const LogMagnitude& b) { return a += b; }
  friend LogMagnitude operator-(LogMagnitude a, const LogMagnitude& b) { return a -= b; }

  /// x^k for integer k (k may be negative for nonzero x).
  LogMagnitude pow(long k) const;
  /// |x|^{1/k}.
  LogMagnitude root(long k) const;

  friend std::partial_ordering operator<=>(const LogMagnitude& a, const LogMagnitude& b);
  friend bool operator==(const LogMagnitude& a, const LogMagnitude& b);

  std::string to_string(int significant_digits = 20) const;

 private:
  Sign sign_ = Sign::zero;
  BigReal log_abs_;
};

/// Sum of positive terms given by their logarithms, anchored at the largest
/// term. Terms more than (precision + 64) bits below the anchor are dropped;
/// their combined contribution is below one ulp of the result for any
/// realistic term count.
LogMagnitude log_sum_exp(std::span<const BigReal> log_terms);

/// Incremental form of log_sum_exp for sums built term by term. The anchor is
/// the running maximum; negligible terms are dropped with the same cutoff.
class LogSumAccumulator {
 public:
  explicit LogSumAccumulator(Precision prec);

  void add_log(const BigReal& log_term);
  void add(const LogMagnitude& term);
  LogMagnitude result() const;
  bool empty() const { return empty_; }

 private:
  Precision prec_;
  bool empty_ = true;
  BigReal anchor_;
  BigReal scaled_sum_;
  BigReal cutoff_;
};

}  // namespace ultrana
