#pragma once

#include "invbinom/real.hpp"

namespace invbinom {

/// Minimal complex arithmetic over Real; std::complex is unspecified for
/// non-builtin element types.
struct Complex {
  Real re;
  Real im;

  explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t precision() const { return std::max(re.precision(), im.precision()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const Real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator*=(long s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex operator-() const { return {-re, -im}; }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }

inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { return sqrt(norm(z)); }
inline Complex conj(const Complex& z) { return {z.re, -z.im}; }

inline Complex inverse(const Complex& z) {
  Real n = norm(z);
  return {z.re / n, -z.im / n};
}

inline Complex operator/(const Complex& a, const Complex& b) { return a * inverse(b); }

}  // namespace invbinom
