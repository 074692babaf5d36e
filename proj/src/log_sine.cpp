#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "invbinom/errors.hpp"
#include "invbinom/special_functions.hpp"

namespace invbinom {
namespace detail {

namespace {

// ∫_0^a x^n ln^i(x) dx = a^(n+1) Σ_{l=0}^{i} (-1)^l i!/(i-l)! ln^(i-l)(a) / (n+1)^(l+1)
Real power_log_moment(long n, int i, const Real& a, const Real& log_a) {
  const mpfr_prec_t b = a.precision();
  Real acc(b);
  Real falling(1L, b);  // i!/(i-l)!
  for (int l = 0; l <= i; ++l) {
    if (l > 0) falling *= static_cast<long>(i - l + 1);
    Real t = falling * pow(log_a, static_cast<unsigned long>(i - l));
    t /= pow(Real(n + 1, b), static_cast<unsigned long>(l + 1));
    if (l % 2 == 0) {
      acc += t;
    } else {
      acc -= t;
    }
  }
  return acc * pow(a, static_cast<unsigned long>(n + 1));
}

std::vector<Real> truncated_product(const std::vector<Real>& x, const std::vector<Real>& y, size_t terms) {
  const mpfr_prec_t b = x.front().precision();
  std::vector<Real> out(terms, Real(b));
  for (size_t i = 0; i < terms && i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (size_t j = 0; i + j < terms && j < y.size(); ++j) {
      if (y[j].is_zero()) continue;
      out[i + j] += x[i] * y[j];
    }
  }
  return out;
}

}  // namespace

Real log_sine_near_zero(int k, int p, const Real& a, mpfr_prec_t bits) {
  if (a.is_zero()) return Real(bits);
  const mpfr_prec_t b = bits + 16;
  const Real aa(a, b);
  const double ad = aa.to_double();
  // coefficients of φ^(2m) decay like (a/2π)^(2m)
  const auto terms = static_cast<size_t>(
      std::ceil(static_cast<double>(b) * std::log(2.0) / (2.0 * std::log(2.0 * M_PI / ad)))) + 6;

  // ln(2 sin(φ/2)) = ln φ + g(φ),  g(φ) = Σ_{m>=1} (-1)^m B_2m / (2m (2m)!) φ^(2m)
  std::vector<Real> g(terms, Real(b));
  mpz_class fact = 1;
  for (size_t m = 1; m < terms; ++m) {
    fact *= (2 * m - 1) * (2 * m);
    mpq_class c = bernoulli(static_cast<int>(2 * m)) / (mpq_class(static_cast<long>(2 * m)) * fact);
    if (m % 2 == 1) c = -c;
    g[m] = Real(c, b);
  }

  // powers g^r as series in φ^2
  std::vector<std::vector<Real>> gpow;
  gpow.emplace_back(terms, Real(b));
  gpow[0][0] = Real(1L, b);
  for (int r = 1; r <= p; ++r) gpow.push_back(truncated_product(gpow.back(), g, terms));

  const Real log_a = log(aa);
  Real total(b);
  mpz_class binom = 1;  // C(p, i)
  for (int i = 0; i <= p; ++i) {
    const auto& series = gpow[static_cast<size_t>(p - i)];
    Real part(b);
    for (size_t m = 0; m < terms; ++m) {
      if (series[m].is_zero()) continue;
      part += series[m] * power_log_moment(k + 2 * static_cast<long>(m), i, aa, log_a);
    }
    part *= binom;
    total += part;
    binom = binom * (p - i) / (i + 1);
  }
  return Real(total, bits);
}

const GaussRule& gauss_legendre(int n, mpfr_prec_t bits) {
  static std::mutex mutex;
  static std::map<std::pair<int, mpfr_prec_t>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, bits}];
  if (slot) return *slot;

  auto rule = std::make_unique<GaussRule>();
  const mpfr_prec_t wb = bits + 32;
  // Returns (P_n(x), P_{n-1}(x)).
  auto legendre = [n](const Real& x) {
    Real p0(1L, x.precision());
    Real p1 = x;
    for (long m = 1; m < n; ++m) {
      Real p2 = (x * p1 * (2 * m + 1) - p0 * m) / (m + 1);
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    return std::make_pair(std::move(p1), std::move(p0));
  };
  auto derivative = [n](const Real& x, const Real& pn, const Real& pn1) {
    return (x * pn - pn1) * static_cast<long>(n) / (x * x - 1L);
  };

  for (int i = 1; i <= n / 2; ++i) {
    // Newton in double until converged, then precision doubling (each step
    // doubles the correct bits), then full-precision steps until the
    // correction is negligible.
    double xd = std::cos(M_PI * (i - 0.25) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xd;
      for (int m = 1; m < n; ++m) {
        const double p2 = ((2 * m + 1) * xd * p1 - m * p0) / (m + 1);
        p0 = p1;
        p1 = p2;
      }
      const double dx = p1 / (n * (xd * p1 - p0) / (xd * xd - 1.0));
      xd -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    Real x(64);
    mpfr_set_d(x.get(), xd, MPFR_RNDN);
    mpfr_prec_t prec = 32;
    while (prec < wb) {
      prec = std::min<mpfr_prec_t>(2 * prec, wb);
      x = Real(x, prec);
      auto [pn, pn1] = legendre(x);
      x -= pn / derivative(x, pn, pn1);
    }
    const Real tiny = ldexp(Real(1L, wb), -static_cast<long>(wb) + 4);
    for (int it = 0; it < 8; ++it) {
      auto [pn, pn1] = legendre(x);
      Real dx = pn / derivative(x, pn, pn1);
      x -= dx;
      if (abs(dx) < tiny) break;
    }
    auto [pn, pn1] = legendre(x);
    Real dp = derivative(x, pn, pn1);
    Real w = 2L / ((1L - x * x) * dp * dp);
    rule->nodes.emplace_back(x, bits);
    rule->weights.emplace_back(w, bits);
  }
  if (n % 2 == 1) {
    Real zero(wb);
    auto [pn, pn1] = legendre(zero);
    Real dp = derivative(zero, pn, pn1);
    rule->nodes.emplace_back(bits);
    rule->weights.emplace_back(Real(2L / (dp * dp), bits));
  }
  slot = std::move(rule);
  return *slot;
}

Real log_sine_gauss(int k, int p, const Real& a, const Real& b, mpfr_prec_t bits, double extra_nodes_factor) {
  const mpfr_prec_t wb = bits + 16;
  const double two_pi = 2.0 * M_PI;

  // Bisect until the Bernstein ellipse through the nearest singularity
  // (φ = 0 or φ = 2π) has parameter ρ >= 2.5.
  std::vector<std::pair<Real, Real>> pending{{Real(a, wb), Real(b, wb)}};
  std::vector<std::tuple<Real, Real, double>> pieces;
  while (!pending.empty()) {
    auto [lo, hi] = std::move(pending.back());
    pending.pop_back();
    const double c = (lo.to_double() + hi.to_double()) / 2.0;
    const double h = (hi.to_double() - lo.to_double()) / 2.0;
    if (h <= 0.0) continue;
    const double u = std::min(c, two_pi - c) / h;
    const double rho = u + std::sqrt(std::max(u * u - 1.0, 0.0));
    if (rho < 2.5) {
      Real mid = ldexp(lo + hi, -1);
      pending.emplace_back(lo, mid);
      pending.emplace_back(std::move(mid), std::move(hi));
      continue;
    }
    pieces.emplace_back(std::move(lo), std::move(hi), rho);
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });

  auto integrand = [k, p](const Real& phi) {
    Real v = log(abs(ldexp(sin(ldexp(phi, -1)), 1)));
    Real out = pow(v, static_cast<unsigned long>(p));
    if (k > 0) out *= pow(phi, static_cast<unsigned long>(k));
    return out;
  };

  Real total(wb);
  for (const auto& [lo, hi, rho] : pieces) {
    // error ~ ρ^(-2n) times a modest bound on the ellipse
    const double needed_bits = static_cast<double>(wb) + 8.0 + 4.0 * p + 3.0 * k;
    int n = static_cast<int>(std::ceil(needed_bits * std::log(2.0) / (2.0 * std::log(rho)) * extra_nodes_factor)) + 4;
    n = (n + 3) / 4 * 4;
    const GaussRule& rule = gauss_legendre(n, wb);
    const Real center = ldexp(lo + hi, -1);
    const Real half = ldexp(hi - lo, -1);
    Real piece(wb);
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      const Real& x = rule.nodes[i];
      if (x.is_zero()) {
        piece += rule.weights[i] * integrand(center);
      } else {
        Real off = half * x;
        piece += rule.weights[i] * (integrand(center + off) + integrand(center - off));
      }
    }
    total += piece * half;
  }
  return Real(total, bits);
}

}  // namespace detail

Real log_sine_value(int j, int k, const Real& theta, mpfr_prec_t bits) {
  if (j < 2) throw DomainError("log_sine: j must be >= 2, got " + std::to_string(j));
  if (k < 0 || k > j - 2) throw DomainError("log_sine: k must satisfy 0 <= k <= j-2");
  const mpfr_prec_t b = bits + 16;
  const Real t(theta, b);
  const Real two_pi = ldexp(pi(b), 1);
  if (t < 0L) throw DomainError("log_sine: negative angle");
  if (t > two_pi + ldexp(Real(1L, b), -static_cast<long>(bits))) throw DomainError("log_sine: angle exceeds 2pi");
  if (t.is_zero()) return Real(bits);

  const int p = j - k - 1;
  const Real half = ldexp(Real(1L, b), -1);
  const Real upper = two_pi - half;

  Real total = detail::log_sine_near_zero(k, p, t < half ? t : half, b);
  if (t > half) total += detail::log_sine_gauss(k, p, half, t < upper ? t : upper, b);
  if (t > upper) {
    // φ = 2π - ψ near the singularity at 2π:
    // ∫_{2π-1/2}^{θ} = Σ_i C(k,i) (2π)^(k-i) (-1)^i [N_i(1/2) - N_i(2π-θ)]
    Real rest = two_pi - t;
    if (rest < 0L) rest = Real(b);
    mpz_class binom = 1;
    for (int i = 0; i <= k; ++i) {
      Real part = detail::log_sine_near_zero(i, p, half, b) - detail::log_sine_near_zero(i, p, rest, b);
      part *= binom;
      part *= pow(two_pi, static_cast<unsigned long>(k - i));
      if (i % 2 == 0) {
        total += part;
      } else {
        total -= part;
      }
      binom = binom * (k - i) / (i + 1);
    }
  }
  return Real(-total, bits);
}

BigReal log_sine(const LogSineSpec& spec, int digits) {
  if (digits < 10) throw DomainError("log_sine: digits must be >= 10");
  const mpfr_prec_t bits = bits_for_digits(working_digits(digits));
  return {log_sine_value(spec.j, spec.k, spec.theta.value(bits), bits), digits};
}

}  // namespace invbinom
