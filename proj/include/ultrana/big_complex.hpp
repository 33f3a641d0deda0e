#pragma once

#include "ultrana/big_real.hpp"

#include <complex>

namespace ultrana {

class BigComplex {
 public:
  explicit BigComplex(Precision prec = Precision()) : re_(prec), im_(prec) {}
  BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}

  /// e^{i theta}
  static BigComplex polar(const BigReal& radius, const BigReal& theta);
  /// i^k
  static BigComplex i_power(long k, Precision prec);

  const BigReal& re() const { return re_; }
  const BigReal& im() const { return im_; }
  Precision precision() const { return re_.precision(); }

  BigReal abs() const { return hypot(re_, im_); }
  BigComplex conj() const { return BigComplex(re_, -im_); }
  std::complex<double> to_complex_double() const { return {re_.to_double(), im_.to_double()}; }

  BigComplex& operator+=(const BigComplex& rhs);
  BigComplex& operator-=(const BigComplex& rhs);
  BigComplex& operator*=(const BigComplex& rhs);
  BigComplex& operator*=(const BigReal& rhs);

  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator*(BigComplex a, const BigReal& b) { return a *= b; }
  friend BigComplex operator*(const BigReal& b, BigComplex a) { return a *= b; }

 private:
  BigReal re_;
  BigReal im_;
};

BigComplex exp(const BigComplex& z);

/// |a - b| / max(|a|, |b|).
BigReal relative_difference(const BigComplex& a, const BigComplex& b);

}  // namespace ultrana
