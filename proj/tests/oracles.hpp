#pragma once

// Reference computations that share no code with the library kernels:
// Bernoulli numbers from the binomial recurrence, Hurwitz zeta by direct
// summation plus an Euler–Maclaurin tail, and Clausen values at multiples
// of π/3 assembled from Hurwitz zeta values.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <string>
#include <vector>

#include "invbinom/real.hpp"

namespace oracle {

using invbinom::Real;

// B_0..B_n via Σ_{k=0}^{m} C(m+1, k) B_k = 0.
inline std::vector<mpq_class> bernoulli_table(int n) {
  std::vector<mpq_class> b(static_cast<size_t>(n + 1));
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    mpq_class acc = 0;
    mpz_class binom = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      acc += binom * b[static_cast<size_t>(k)];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[static_cast<size_t>(m)] = -acc / (m + 1);
    b[static_cast<size_t>(m)].canonicalize();
  }
  return b;
}

// ζ(s, a) = Σ_{m>=0} (m + a)^(-s), s >= 2, 0 < a <= 1.
inline Real hurwitz(int s, const Real& a, mpfr_prec_t bits, int N = 1000, int K = 40) {
  static const std::vector<mpq_class> B = bernoulli_table(2 * 60);
  Real sum(bits);
  for (int m = 0; m < N; ++m) sum += 1L / invbinom::pow(a + static_cast<long>(m), static_cast<unsigned long>(s));
  const Real x = a + static_cast<long>(N);
  sum += 1L / (invbinom::pow(x, static_cast<unsigned long>(s - 1)) * static_cast<long>(s - 1));
  sum += 1L / (invbinom::pow(x, static_cast<unsigned long>(s)) * 2L);
  // + Σ_k B_2k/(2k)! (s)_(2k-1) x^(1-s-2k)
  mpz_class rising = s;  // (s)_1
  mpz_class fact = 2;    // (2k)!
  for (int k = 1; k <= K; ++k) {
    if (k > 1) {
      rising *= (s + 2 * k - 3) * (s + 2 * k - 2);
      fact *= (2 * k - 1) * (2 * k);
    }
    mpq_class c = B[static_cast<size_t>(2 * k)] * rising / fact;
    sum += Real(c, bits) / invbinom::pow(x, static_cast<unsigned long>(s + 2 * k - 1));
  }
  return sum;
}

inline Real zeta(int s, mpfr_prec_t bits) { return hurwitz(s, Real(1L, bits), bits); }

// Cl_j(kπ/3): sine series for even j, cosine series for odd j, as
// 6^(-j) Σ_{r=1}^{6} trig(r k π/3) ζ(j, r/6).
inline Real clausen_sixth(int j, int k, mpfr_prec_t bits) {
  const Real third_pi = invbinom::pi(bits) / 3L;
  Real sum(bits);
  for (int r = 1; r <= 6; ++r) {
    const Real angle = third_pi * static_cast<long>(r * k);
    const Real trig = j % 2 == 0 ? invbinom::sin(angle) : invbinom::cos(angle);
    mpq_class a(r, 6);
    a.canonicalize();
    sum += trig * hurwitz(j, Real(a, bits), bits);
  }
  return sum / invbinom::pow(Real(6L, bits), static_cast<unsigned long>(j));
}

// |a - b| < 10^-digits
inline bool agree(const Real& a, const Real& b, int digits) {
  const mpfr_prec_t bits = std::max(a.precision(), b.precision());
  return invbinom::abs(a - b) < invbinom::ten_to_minus(digits, bits);
}

}  // namespace oracle
