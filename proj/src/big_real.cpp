#include "ultrana/big_real.hpp"

#include "ultrana/errors.hpp"

#include <cstdlib>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ultrana {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

Precision wider(const BigReal& a, const BigReal& b) {
  return a.precision() < b.precision() ? b.precision() : a.precision();
}

}  // namespace

Precision::Precision(long bits) : bits_(bits) {
  if (bits < 64) {
    throw DomainError("precision must be at least 64 bits, got " + std::to_string(bits));
  }
  if (bits > MPFR_PREC_MAX / 4) {
    throw DomainError("precision too large: " + std::to_string(bits));
  }
}

Precision default_precision() {
  if (const char* env = std::getenv("ULTRANA_PRECISION")) {
    char* end = nullptr;
    const long bits = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && bits >= 64) {
      return Precision(bits);
    }
  }
  return Precision(kDefaultPrecisionBits);
}

BigReal::BigReal(Precision prec) {
  mpfr_init2(value_, prec.bits());
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(long value, Precision prec) {
  mpfr_init2(value_, prec.bits());
  mpfr_set_si(value_, value, kRnd);
}

BigReal::BigReal(unsigned long value, Precision prec) {
  mpfr_init2(value_, prec.bits());
  mpfr_set_ui(value_, value, kRnd);
}

BigReal::BigReal(double value, Precision prec) {
  mpfr_init2(value_, prec.bits());
  mpfr_set_d(value_, value, kRnd);
}

BigReal::BigReal(const mpz_t value, Precision prec) {
  mpfr_init2(value_, prec.bits());
  mpfr_set_z(value_, value, kRnd);
}

BigReal BigReal::parse(std::string_view text, Precision prec) {
  BigReal out(prec);
  const std::string buf(text);
  if (buf.empty()) throw DomainError("empty number");
  char* end = nullptr;
  mpfr_strtofr(out.value_, buf.c_str(), &end, 10, kRnd);
  if (end == buf.c_str() || *end != '\0' || !out.is_finite()) {
    throw DomainError("not a decimal number: '" + buf + "'");
  }
  return out;
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, kRnd);
}

BigReal::BigReal(BigReal&& other) noexcept {
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this == &other) return *this;
  if (value_[0]._mpfr_d == nullptr) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
  } else if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
  }
  mpfr_set(value_, other.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  std::swap(value_[0], other.value_[0]);
  return *this;
}

BigReal::~BigReal() {
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
}

BigReal BigReal::with_precision(Precision prec) const {
  BigReal out(prec);
  mpfr_set(out.value_, value_, kRnd);
  return out;
}

void BigReal::ensure_at_least(Precision prec) {
  if (mpfr_get_prec(value_) < prec.bits()) mpfr_prec_round(value_, prec.bits(), kRnd);
}

long BigReal::to_long_floor() const { return mpfr_get_si(value_, MPFR_RNDD); }

std::string BigReal::to_string(int significant_digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  const int digits = significant_digits < 1 ? 1 : significant_digits;
  const std::string fmt = "%." + std::to_string(digits - 1) + "Re";
  const int len = mpfr_snprintf(nullptr, 0, fmt.c_str(), value_);
  std::vector<char> buf(static_cast<std::size_t>(len) + 1);
  mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), value_);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  ensure_at_least(rhs.precision());
  mpfr_add(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  ensure_at_least(rhs.precision());
  mpfr_sub(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  ensure_at_least(rhs.precision());
  mpfr_mul(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  ensure_at_least(rhs.precision());
  mpfr_div(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal out(*this);
  mpfr_neg(out.value_, out.value_, kRnd);
  return out;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

std::partial_ordering operator<=>(const BigReal& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

std::ostream& operator<<(std::ostream& os, const BigReal& x) { return os << x.to_string(20); }

#define ULTRANA_UNARY(name, fn)                 \
  BigReal name(const BigReal& x) {              \
    BigReal out(x.precision());                 \
    fn(out.get(), x.get(), kRnd);               \
    return out;                                 \
  }

ULTRANA_UNARY(abs, mpfr_abs)
ULTRANA_UNARY(sqrt, mpfr_sqrt)
ULTRANA_UNARY(log, mpfr_log)
ULTRANA_UNARY(log1p, mpfr_log1p)
ULTRANA_UNARY(exp, mpfr_exp)
ULTRANA_UNARY(expm1, mpfr_expm1)
ULTRANA_UNARY(sin, mpfr_sin)
ULTRANA_UNARY(cos, mpfr_cos)
ULTRANA_UNARY(lngamma, mpfr_lngamma)

#undef ULTRANA_UNARY

BigReal floor(const BigReal& x) {
  BigReal out(x.precision());
  mpfr_floor(out.get(), x.get());
  return out;
}

BigReal pow(const BigReal& base, const BigReal& exponent) {
  BigReal out(wider(base, exponent));
  mpfr_pow(out.get(), base.get(), exponent.get(), kRnd);
  return out;
}

BigReal pow(const BigReal& base, long exponent) {
  BigReal out(base.precision());
  mpfr_pow_si(out.get(), base.get(), exponent, kRnd);
  return out;
}

BigReal hypot(const BigReal& x, const BigReal& y) {
  BigReal out(wider(x, y));
  mpfr_hypot(out.get(), x.get(), y.get(), kRnd);
  return out;
}

BigReal min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }
BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

BigReal pi(Precision prec) {
  BigReal out(prec);
  mpfr_const_pi(out.get(), kRnd);
  return out;
}

BigReal euler_e(Precision prec) {
  BigReal one(1L, prec);
  return exp(one);
}

BigReal log2_const(Precision prec) {
  BigReal out(prec);
  mpfr_const_log2(out.get(), kRnd);
  return out;
}

BigReal relative_difference(const BigReal& a, const BigReal& b) {
  const BigReal scale = max(abs(a), abs(b));
  if (scale.is_zero()) return BigReal(wider(a, b));
  return abs(a - b) / scale;
}

}  // namespace ultrana
