#pragma once

// Exact scalars: arbitrary-precision rationals and Gaussian rationals.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <ostream>
#include <string>

namespace lve {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" with q omitted when 1.
inline std::string to_string(const Rational& r) { return r.str(); }

template <class Real>
Real to_real(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  return num.template convert_to<Real>() / den.template convert_to<Real>();
}

/// Complex number with exact rational real and imaginary parts.
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
  GaussRational(long long re) : re_(re), im_(0) {}

  static GaussRational i() { return {0, 1}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }
  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  GaussRational conj() const { return {re_, -im_}; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
  }
  GaussRational& operator*=(const Rational& s) {
    re_ *= s;
    im_ *= s;
    return *this;
  }
  GaussRational& operator/=(const Rational& s) {
    re_ /= s;
    im_ /= s;
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator*(GaussRational a, const Rational& s) { return a *= s; }
  friend GaussRational operator*(const Rational& s, GaussRational a) { return a *= s; }
  friend GaussRational operator/(GaussRational a, const Rational& s) { return a /= s; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  template <class Real>
  std::complex<Real> to_complex() const {
    return {to_real<Real>(re_), to_real<Real>(im_)};
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussRational& z) {
    return os << to_string(z);
  }

  /// "re", "im i", or "re+im i" in exact fraction form.
  friend std::string to_string(const GaussRational& z) {
    if (z.im_ == 0) return z.re_.str();
    std::string im = (z.im_ < 0 ? Rational(-z.im_) : z.im_).str();
    if (z.re_ == 0) return (z.im_ < 0 ? "-" : "") + im + "i";
    return z.re_.str() + (z.im_ < 0 ? "-" : "+") + im + "i";
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

/// i^p for integer p >= 0.
inline GaussRational i_power(unsigned p) {
  switch (p % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

/// (p-1)!! for even p; 0 for odd p.
inline BigInt double_factorial_odd(unsigned p) {
  if (p % 2 == 1) return 0;
  BigInt r = 1;
  for (unsigned i = p == 0 ? 0 : p - 1; i > 1; i -= 2) r *= i;
  return r;
}

}  // namespace lve
