#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ultrana {

/// Working precision in bits. Values below 64 bits are rejected.
class Precision {
 public:
  constexpr Precision() = default;
  explicit Precision(long bits);

  constexpr long bits() const { return bits_; }
  Precision doubled() const { return Precision(bits_ * 2); }

  friend constexpr bool operator==(Precision, Precision) = default;
  friend constexpr auto operator<=>(Precision, Precision) = default;

 private:
  long bits_ = 256;
};

inline constexpr long kDefaultPrecisionBits = 256;

/// Precision from the ULTRANA_PRECISION environment variable, falling back
/// to 256 bits when it is unset or malformed.
Precision default_precision();

/// Arbitrary-precision real backed by an MPFR value. Every value carries its
/// own precision; binary operations round to the larger operand precision.
/// All operations round to nearest.
class BigReal {
 public:
  explicit BigReal(Precision prec = Precision());
  BigReal(long value, Precision prec);
  BigReal(int value, Precision prec) : BigReal(static_cast<long>(value), prec) {}
  BigReal(unsigned long value, Precision prec);
  BigReal(double value, Precision prec);
  BigReal(const mpz_t value, Precision prec);

  /// Parses a decimal string ("0.5", "1e-3", "-2") exactly rounded to prec.
  static BigReal parse(std::string_view text, Precision prec);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  Precision precision() const { return Precision(mpfr_get_prec(value_)); }
  /// Re-rounds the value to a new precision.
  BigReal with_precision(Precision prec) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  bool is_nan() const { return mpfr_nan_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long to_long_floor() const;
  /// Scientific notation with the given number of significant digits.
  std::string to_string(int significant_digits = 20) const;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal& operator+=(long rhs);
  BigReal& operator-=(long rhs);
  BigReal& operator*=(long rhs);
  BigReal& operator/=(long rhs);

  BigReal operator-() const;

  friend BigReal operator+(BigReal lhs, const BigReal& rhs) { return lhs += rhs; }
  friend BigReal operator-(BigReal lhs, const BigReal& rhs) { return lhs -= rhs; }
  friend BigReal operator*(BigReal lhs, const BigReal& rhs) { return lhs *= rhs; }
  friend BigReal operator/(BigReal lhs, const BigReal& rhs) { return lhs /= rhs; }
  friend BigReal operator+(BigReal lhs, long rhs) { return lhs += rhs; }
  friend BigReal operator-(BigReal lhs, long rhs) { return lhs -= rhs; }
  friend BigReal operator*(BigReal lhs, long rhs) { return lhs *= rhs; }
  friend BigReal operator/(BigReal lhs, long rhs) { return lhs /= rhs; }
  friend BigReal operator*(long lhs, BigReal rhs) { return rhs *= lhs; }

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, long b);

  friend std::ostream& operator<<(std::ostream& os, const BigReal& x);

 private:
  void ensure_at_least(Precision prec);

  mpfr_t value_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log1p(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal expm1(const BigReal& x);
BigReal pow(const BigReal& base, const BigReal& exponent);
BigReal pow(const BigReal& base, long exponent);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal hypot(const BigReal& x, const BigReal& y);
BigReal lngamma(const BigReal& x);
BigReal min(const BigReal& a, const BigReal& b);
BigReal max(const BigReal& a, const BigReal& b);
BigReal floor(const BigReal& x);

BigReal pi(Precision prec);
BigReal euler_e(Precision prec);
BigReal log2_const(Precision prec);

/// |a - b| / max(|a|, |b|); zero when both are zero.
BigReal relative_difference(const BigReal& a, const BigReal& b);

}  // namespace ultrana
