#include <cmath>
#include <string>

#include "invbinom/errors.hpp"
#include "invbinom/special_functions.hpp"

namespace invbinom {

Angle Angle::sixth(int k) {
  if (k < 0 || k > 5) throw DomainError("Angle: sixth-root index must be in 0..5, got " + std::to_string(k));
  Angle a;
  a.sixth_ = k;
  return a;
}

Angle Angle::raw(const Real& theta) {
  if (theta < 0L || theta >= ldexp(pi(theta.precision()), 1)) {
    throw DomainError("Angle: raw angle must satisfy 0 <= theta < 2pi");
  }
  Angle a;
  a.raw_ = theta;
  return a;
}

Real Angle::value(mpfr_prec_t bits) const {
  if (sixth_) return pi(bits) * static_cast<long>(*sixth_) / 3L;
  return Real(*raw_, bits);
}

double Angle::approx() const {
  if (sixth_) return M_PI * *sixth_ / 3.0;
  return raw_->to_double();
}

namespace {

// mag * i^k
Complex times_i_power(Real mag, int k) {
  const mpfr_prec_t bits = mag.precision();
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {std::move(mag), Real(bits)};
    case 1:
      return {Real(bits), std::move(mag)};
    case 2:
      return {-mag, Real(bits)};
    default:
      return {Real(bits), -mag};
  }
}

// Li_a(e^{iθ}) for 0 < θ <= π from the expansion about z = 1:
//   Li_a(e^μ) = μ^(a-1)/(a-1)! [H_(a-1) - ln(-μ)] + Σ_{k≠a-1} ζ(a-k) μ^k / k!,
// μ = iθ. The k > a-1 part only has ζ(0) and ζ(1-2m); writing
// ζ(1-2m) = (-1)^m 2 (2m-1)! ζ(2m) / (2π)^(2m) turns it into
//   -(iθ)^a/(2 a!) + (iθ)^(a-1) Σ_m 2 ζ(2m) x^(2m) / [(2m)(2m+1)⋯(2m+a-1)],
// x = θ/2π <= 1/2, a series of positive terms.
Complex polylog_near_one(int a, const Real& theta, mpfr_prec_t b) {
  Complex sum(b);
  Real theta_pow(1L, b);
  mpz_class fact = 1;
  for (int k = 0; k <= a - 2; ++k) {
    if (k > 0) {
      theta_pow *= theta;
      fact *= k;
    }
    Real mag = zeta_value(a - k, b) * theta_pow;
    mag /= fact;
    sum += times_i_power(std::move(mag), k);
  }

  // (iθ)^(a-1)/(a-1)! [H_(a-1) - ln θ + iπ/2]
  Real lead = theta_pow * theta;
  fact *= (a - 1);
  lead /= fact;
  Real harmonic(mpq_class(0), b);
  for (int l = 1; l <= a - 1; ++l) harmonic += Real(mpq_class(1, l), b);
  Complex bracket{harmonic - log(theta), ldexp(pi(b), -1)};
  sum += times_i_power(Real(lead), a - 1) * bracket;

  // ζ(0) (iθ)^a / a!
  Real zeta0_term = lead * theta / static_cast<long>(a);
  sum -= times_i_power(ldexp(zeta0_term, -1), a);

  const Real x = theta / ldexp(pi(b), 1);
  const Real x2 = x * x;
  const Real eps = ldexp(Real(1L, b), -static_cast<long>(b));
  Real tail(b);
  Real xpow(1L, b);
  for (long m = 1;; ++m) {
    xpow *= x2;
    Real t = ldexp(zeta_value(2 * m, b) * xpow, 1);
    mpz_class rising = 1;
    for (long l = 0; l < a; ++l) rising *= (2 * m + l);
    t /= rising;
    tail += t;
    if (t < eps) break;
  }
  Real theta_a1 = pow(theta, static_cast<unsigned long>(a - 1));
  sum += times_i_power(tail * theta_a1, a - 1);
  return sum;
}

}  // namespace

Complex polylog_on_circle_value(int a, const Real& theta, mpfr_prec_t bits) {
  if (a < 2) throw DomainError("polylog_on_circle: order must be >= 2, got " + std::to_string(a));
  const mpfr_prec_t b = bits + 24;
  const Real two_pi = ldexp(pi(b), 1);
  Real t(theta, b);
  if (t < 0L || t > two_pi) throw DomainError("polylog_on_circle: angle outside [0, 2pi]");
  if (t.is_zero() || t == two_pi) return {Real(zeta_value(a, b), bits), Real(bits)};

  bool mirrored = false;
  if (t > pi(b)) {
    t = two_pi - t;
    mirrored = true;
  }
  Complex v = polylog_near_one(a, t, b);
  if (mirrored) v = conj(v);
  return {Real(v.re, bits), Real(v.im, bits)};
}

ComplexValue polylog_on_circle(int a, const Angle& theta, int digits) {
  if (a < 2) throw DomainError("polylog_on_circle: order must be >= 2, got " + std::to_string(a));
  if (digits < 10) throw DomainError("polylog_on_circle: digits must be >= 10");
  const mpfr_prec_t bits = bits_for_digits(working_digits(digits));
  Complex v = polylog_on_circle_value(a, theta.value(bits), bits);
  return {BigReal(std::move(v.re), digits), BigReal(std::move(v.im), digits)};
}

BigReal clausen(int j, const Angle& theta, int digits) {
  if (j < 2) throw DomainError("clausen: index must be >= 2, got " + std::to_string(j));
  ComplexValue v = polylog_on_circle(j, theta, digits);
  return j % 2 == 0 ? std::move(v.im) : std::move(v.re);
}

}  // namespace invbinom
