#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include "invbinom/errors.hpp"
#include "invbinom/special_functions.hpp"

namespace invbinom {

mpq_class bernoulli(int n) {
  if (n < 0) throw DomainError("bernoulli: negative index");
  if (n == 1) return mpq_class(-1, 2);
  if (n % 2 == 1) return 0;

  static std::mutex mutex;
  static std::vector<mpq_class> cache{mpq_class(1), mpq_class(-1, 2)};
  std::lock_guard lock(mutex);
  while (static_cast<int>(cache.size()) <= n) {
    // Σ_{k=0}^{m} C(m+1, k) B_k = 0
    const int m = static_cast<int>(cache.size());
    if (m % 2 == 1) {
      cache.emplace_back(0);
      continue;
    }
    mpq_class acc = 0;
    mpz_class binom = 1;  // C(m+1, 0)
    for (int k = 0; k < m; ++k) {
      if (k < 2 || k % 2 == 0) acc += binom * cache[static_cast<size_t>(k)];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    mpq_class b = -acc / (m + 1);
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[static_cast<size_t>(n)];
}

namespace {

Real zeta_direct(long s, long terms, mpfr_prec_t bits) {
  Real acc(bits);
  for (long n = terms; n >= 1; --n) {
    Real t(n, bits);
    acc += 1 / pow(t, static_cast<unsigned long>(s));
  }
  return acc;
}

Real zeta_even(long s, mpfr_prec_t bits) {
  // ζ(s) = (-1)^(s/2+1) B_s (2π)^s / (2 s!)
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(s));
  Real r(bernoulli(static_cast<int>(s)), bits);
  r *= pow(ldexp(pi(bits), 1), static_cast<unsigned long>(s));
  r /= fact;
  r = ldexp(r, -1);
  if ((s / 2) % 2 == 0) r = -r;
  return r;
}

// Borwein's alternating-series algorithm for ζ(s) = η(s)/(1 - 2^(1-s)):
// error below 3 (3+√8)^(-n) / (1 - 2^(1-s)).
Real zeta_borwein(long s, mpfr_prec_t bits) {
  const double rate = std::log(3.0 + std::sqrt(8.0));
  const long n = static_cast<long>(std::ceil((bits * std::log(2.0) + std::log(6.0)) / rate)) + 2;

  std::vector<mpz_class> d(static_cast<size_t>(n + 1));
  mpz_class term = 1;  // i = 0 term of n Σ (n+i-1)! 4^i / ((n-i)! (2i)!)
  mpz_class acc = term;
  d[0] = acc;
  for (long i = 1; i <= n; ++i) {
    term *= 2 * (n + i - 1) * (n - i + 1);
    mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(i * (2 * i - 1)));
    acc += term;
    d[static_cast<size_t>(i)] = acc;
  }
  const mpz_class& dn = d[static_cast<size_t>(n)];

  Real sum(bits);
  for (long k = 0; k < n; ++k) {
    Real t(mpz_class(d[static_cast<size_t>(k)] - dn), bits);
    t /= pow(Real(k + 1, bits), static_cast<unsigned long>(s));
    if (k % 2 == 0) {
      sum += t;
    } else {
      sum -= t;
    }
  }
  Real denom(dn, bits);
  denom *= (1 - ldexp(Real(1L, bits), 1 - s));
  return -sum / denom;
}

}  // namespace

Real zeta_value(long s, mpfr_prec_t bits) {
  if (s < 2) throw DomainError("zeta: s must be >= 2, got " + std::to_string(s));
  const mpfr_prec_t b = bits + 16;
  // Direct summation once the tail N^(1-s)/(s-1) drops below 2^-b for N <= 128.
  const double log2_terms = static_cast<double>(b) / static_cast<double>(s - 1);
  Real r(b);
  if (log2_terms <= 7.0) {
    r = zeta_direct(s, static_cast<long>(std::ceil(std::exp2(log2_terms))) + 1, b);
  } else if (s % 2 == 0) {
    r = zeta_even(s, b);
  } else {
    r = zeta_borwein(s, b);
  }
  return Real(r, bits);
}

BigReal zeta(int s, int digits) {
  if (s < 2) throw DomainError("zeta: s must be >= 2, got " + std::to_string(s));
  if (digits < 10) throw DomainError("zeta: digits must be >= 10");
  return {zeta_value(s, bits_for_digits(working_digits(digits))), digits};
}

}  // namespace invbinom
