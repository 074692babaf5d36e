#pragma once

// Arbitrary-precision zeta values, polylogarithms on the unit circle,
// Clausen functions, generalized log-sine integrals and multiple
// polylogarithms with sign twists.
//
// Every public entry point takes a requested accuracy in decimal digits,
// computes internally with working_digits(digits) and returns a BigReal
// tagged with the requested digits. The *_value functions are the raw
// kernels used by the other modules: they return a Real carrying the
// given binary precision and aim for an absolute error below 2^-bits.

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "invbinom/complex.hpp"
#include "invbinom/real.hpp"

namespace invbinom {

/// A point on the circle: either an exact multiple kπ/3 (k = 0..5) or a raw
/// angle 0 <= θ < 2π.
class Angle {
 public:
  static Angle sixth(int k);
  static Angle raw(const Real& theta);

  std::optional<int> sixth_index() const { return sixth_; }
  /// θ rounded to `bits`.
  Real value(mpfr_prec_t bits) const;
  /// Approximate θ, for diagnostics and node-count heuristics.
  double approx() const;

 private:
  Angle() = default;
  std::optional<int> sixth_;
  std::optional<Real> raw_;
};

/// Ls_j^(k)(θ) = -∫_0^θ φ^k ln^(j-k-1)|2 sin(φ/2)| dφ.
struct LogSineSpec {
  int j = 2;
  int k = 0;
  Angle theta = Angle::sixth(1);
};

/// Σ_{m1>…>mn>0} z^m1 σ1^m1 ⋯ σn^mn / (m1^s1 ⋯ mn^sn).
struct MultiPolylogSpec {
  std::vector<int> s;
  std::vector<int> sigma;
  Complex argument{Real(1L, 64), Real(64)};

  /// Argument z = 1 (exact).
  static MultiPolylogSpec at_one(std::vector<int> s, std::vector<int> sigma);
  /// Argument z = e^{iθ}, rounded to `bits`.
  static MultiPolylogSpec on_circle(std::vector<int> s, std::vector<int> sigma, const Angle& theta,
                                    mpfr_prec_t bits);
};

struct ComplexValue {
  BigReal re;
  BigReal im;
};

/// Exact Bernoulli number B_n (B_1 = -1/2). Cached, thread-safe.
mpq_class bernoulli(int n);

BigReal zeta(int s, int digits);
Real zeta_value(long s, mpfr_prec_t bits);

/// Li_a(e^{iθ}) for a >= 2.
ComplexValue polylog_on_circle(int a, const Angle& theta, int digits);
Complex polylog_on_circle_value(int a, const Real& theta, mpfr_prec_t bits);

/// Cl_j(θ): sine series for even j, cosine series for odd j.
BigReal clausen(int j, const Angle& theta, int digits);

BigReal log_sine(const LogSineSpec& spec, int digits);
/// Raw kernel; 0 <= theta <= 2π.
Real log_sine_value(int j, int k, const Real& theta, mpfr_prec_t bits);

ComplexValue multiple_polylog(const MultiPolylogSpec& spec, int digits);

namespace detail {

/// ∫_0^a φ^k ln^p(2 sin(φ/2)) dφ for 0 <= a <= 1, by termwise integration
/// of the even power series of ln(sin(φ/2)/(φ/2)).
Real log_sine_near_zero(int k, int p, const Real& a, mpfr_prec_t bits);

/// ∫_a^b φ^k ln^p|2 sin(φ/2)| dφ by Gauss–Legendre on [a, b] ⊂ (0, 2π),
/// bisecting until every piece sits comfortably away from 0 and 2π.
/// `extra_nodes_factor` > 1 inflates the node count (used for validation).
Real log_sine_gauss(int k, int p, const Real& a, const Real& b, mpfr_prec_t bits,
                    double extra_nodes_factor = 1.0);

/// Gauss–Legendre nodes and weights on [-1, 1] (positive half, including
/// the zero node when n is odd). Cached per (n, bits).
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};
const GaussRule& gauss_legendre(int n, mpfr_prec_t bits);

}  // namespace detail

}  // namespace invbinom
