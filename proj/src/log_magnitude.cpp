#include "ultrana/log_magnitude.hpp"

#include "ultrana/errors.hpp"

#include <algorithm>

namespace ultrana {

namespace {

BigReal negligible_cutoff(Precision prec) { return log2_const(prec) * (prec.bits() + 64); }

Sign flip(Sign s) {
  switch (s) {
    case Sign::negative: return Sign::positive;
    case Sign::positive: return Sign::negative;
    default: return Sign::zero;
  }
}

Sign multiply(Sign a, Sign b) {
  return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}

}  // namespace

LogMagnitude::LogMagnitude(Precision prec) : log_abs_(prec) {}

LogMagnitude LogMagnitude::one(Precision prec) { return from_log(BigReal(prec)); }

LogMagnitude LogMagnitude::from_log(BigReal log_abs, Sign sign) {
  if (!log_abs.is_finite() && !(log_abs.sign() < 0)) {
    throw DomainError("log magnitude must be finite");
  }
  LogMagnitude out(log_abs.precision());
  if (sign == Sign::zero || (!log_abs.is_finite() && log_abs.sign() < 0)) return out;
  out.sign_ = sign;
  out.log_abs_ = std::move(log_abs);
  return out;
}

LogMagnitude LogMagnitude::from_value(const BigReal& value) {
  LogMagnitude out(value.precision());
  if (value.is_zero()) return out;
  if (!value.is_finite()) throw DomainError("cannot take log of a non-finite value");
  out.sign_ = value.sign() > 0 ? Sign::positive : Sign::negative;
  out.log_abs_ = log(abs(value));
  return out;
}

const BigReal& LogMagnitude::log_abs() const {
  if (sign_ == Sign::zero) throw DomainError("log of zero magnitude is undefined");
  return log_abs_;
}

BigReal LogMagnitude::to_big_real() const {
  if (sign_ == Sign::zero) return BigReal(precision());
  BigReal v = exp(log_abs_);
  return sign_ == Sign::negative ? -v : v;
}

double LogMagnitude::log_abs_double() const { return log_abs().to_double(); }

LogMagnitude& LogMagnitude::operator*=(const LogMagnitude& rhs) {
  sign_ = multiply(sign_, rhs.sign_);
  if (sign_ != Sign::zero) log_abs_ += rhs.log_abs_;
  return *this;
}

LogMagnitude& LogMagnitude::operator/=(const LogMagnitude& rhs) {
  if (rhs.sign_ == Sign::zero) throw DomainError("division by zero magnitude");
  sign_ = multiply(sign_, rhs.sign_);
  if (sign_ != Sign::zero) log_abs_ -= rhs.log_abs_;
  return *this;
}

LogMagnitude& LogMagnitude::operator+=(const LogMagnitude& rhs) {
  if (rhs.sign_ == Sign::zero) return *this;
  if (sign_ == Sign::zero) {
    *this = rhs;
    return *this;
  }
  const bool this_larger = log_abs_ >= rhs.log_abs_;
  const BigReal& hi = this_larger ? log_abs_ : rhs.log_abs_;
  const BigReal& lo = this_larger ? rhs.log_abs_ : log_abs_;
  const Sign hi_sign = this_larger ? sign_ : rhs.sign_;
  const BigReal delta = exp(lo - hi);
  if (sign_ == rhs.sign_) {
    BigReal updated = hi + log1p(delta);
    log_abs_ = std::move(updated);
    return *this;
  }
  // Opposite signs: |hi| - |lo| = |hi| (1 - e^{lo-hi}).
  if (delta == 1L) {
    *this = LogMagnitude(precision());
    return *this;
  }
  BigReal updated = hi + log1p(-delta);
  log_abs_ = std::move(updated);
  sign_ = hi_sign;
  return *this;
}

LogMagnitude& LogMagnitude::operator-=(const LogMagnitude& rhs) { return *this += -rhs; }

LogMagnitude LogMagnitude::operator-() const {
  LogMagnitude out(*this);
  out.sign_ = flip(sign_);
  return out;
}

LogMagnitude LogMagnitude::pow(long k) const {
  if (k == 0) return one(precision());
  if (sign_ == Sign::zero) {
    if (k < 0) throw DomainError("negative power of zero");
    return *this;
  }
  LogMagnitude out(*this);
  out.log_abs_ *= k;
  if (sign_ == Sign::negative && k % 2 == 0) out.sign_ = Sign::positive;
  return out;
}

LogMagnitude LogMagnitude::root(long k) const {
  if (k <= 0) throw DomainError("root order must be positive");
  if (sign_ == Sign::zero) return *this;
  LogMagnitude out(*this);
  out.log_abs_ /= k;
  out.sign_ = Sign::positive;
  return out;
}

std::partial_ordering operator<=>(const LogMagnitude& a, const LogMagnitude& b) {
  const int sa = static_cast<int>(a.sign_);
  const int sb = static_cast<int>(b.sign_);
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::partial_ordering::equivalent;
  const auto c = a.log_abs_ <=> b.log_abs_;
  if (sa > 0) return c;
  if (c == std::partial_ordering::less) return std::partial_ordering::greater;
  if (c == std::partial_ordering::greater) return std::partial_ordering::less;
  return c;
}

bool operator==(const LogMagnitude& a, const LogMagnitude& b) {
  return a.sign_ == b.sign_ && (a.sign_ == Sign::zero || a.log_abs_ == b.log_abs_);
}

std::string LogMagnitude::to_string(int significant_digits) const {
  switch (sign_) {
    case Sign::zero: return "0";
    case Sign::negative: return "-exp(" + log_abs_.to_string(significant_digits) + ")";
    default: return "exp(" + log_abs_.to_string(significant_digits) + ")";
  }
}

LogMagnitude log_sum_exp(std::span<const BigReal> log_terms) {
  if (log_terms.empty()) return LogMagnitude();
  Precision prec = log_terms.front().precision();
  std::size_t arg = 0;
  for (std::size_t i = 1; i < log_terms.size(); ++i) {
    if (log_terms[arg] < log_terms[i]) arg = i;
    if (prec < log_terms[i].precision()) prec = log_terms[i].precision();
  }
  const BigReal& anchor = log_terms[arg];
  const BigReal floor_log = anchor - negligible_cutoff(prec);
  BigReal scaled(prec);
  for (const BigReal& t : log_terms) {
    if (t < floor_log) continue;
    scaled += exp(t - anchor);
  }
  return LogMagnitude::from_log(anchor.with_precision(prec) + log(scaled));
}

LogSumAccumulator::LogSumAccumulator(Precision prec)
    : prec_(prec), anchor_(prec), scaled_sum_(prec), cutoff_(negligible_cutoff(prec)) {}

void LogSumAccumulator::add_log(const BigReal& log_term) {
  if (empty_) {
    anchor_ = log_term.with_precision(prec_);
    scaled_sum_ = BigReal(1L, prec_);
    empty_ = false;
    return;
  }
  BigReal diff = log_term - anchor_;
  if (diff.sign() > 0) {
    if (diff > cutoff_) {
      scaled_sum_ = BigReal(1L, prec_);
    } else {
      scaled_sum_ *= exp(-diff);
      scaled_sum_ += 1L;
    }
    anchor_ = log_term.with_precision(prec_);
    return;
  }
  if (-diff > cutoff_) return;
  scaled_sum_ += exp(diff);
}

void LogSumAccumulator::add(const LogMagnitude& term) {
  if (term.is_zero()) return;
  if (!term.is_positive()) throw DomainError("LogSumAccumulator only sums positive terms");
  add_log(term.log_abs());
}

LogMagnitude LogSumAccumulator::result() const {
  if (empty_) return LogMagnitude(prec_);
  return LogMagnitude::from_log(anchor_ + log(scaled_sum_));
}

}  // namespace ultrana
