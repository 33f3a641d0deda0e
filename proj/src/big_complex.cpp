#include "ultrana/big_complex.hpp"

namespace ultrana {

BigComplex BigComplex::polar(const BigReal& radius, const BigReal& theta) {
  return BigComplex(radius * cos(theta), radius * sin(theta));
}

BigComplex BigComplex::i_power(long k, Precision prec) {
  switch (((k % 4) + 4) % 4) {
    case 0: return BigComplex(BigReal(1L, prec), BigReal(prec));
    case 1: return BigComplex(BigReal(prec), BigReal(1L, prec));
    case 2: return BigComplex(BigReal(-1L, prec), BigReal(prec));
    default: return BigComplex(BigReal(prec), BigReal(-1L, prec));
  }
}

BigComplex& BigComplex::operator+=(const BigComplex& rhs) {
  re_ += rhs.re_;
  im_ += rhs.im_;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& rhs) {
  re_ -= rhs.re_;
  im_ -= rhs.im_;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& rhs) {
  BigReal re = re_ * rhs.re_ - im_ * rhs.im_;
  BigReal im = re_ * rhs.im_ + im_ * rhs.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

BigComplex& BigComplex::operator*=(const BigReal& rhs) {
  re_ *= rhs;
  im_ *= rhs;
  return *this;
}

BigComplex exp(const BigComplex& z) { return BigComplex::polar(exp(z.re()), z.im()); }

BigReal relative_difference(const BigComplex& a, const BigComplex& b) {
  const BigReal scale = max(a.abs(), b.abs());
  if (scale.is_zero()) return BigReal(a.precision());
  return (a - b).abs() / scale;
}

}  // namespace ultrana
