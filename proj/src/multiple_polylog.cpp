// Multiple polylogarithms with sign twists, evaluated through the iterated
// integral G(a_1, ..., a_w; y). Nested sums converge geometrically only when
// |y| is strictly smaller than every nonzero letter, which fails on the unit
// circle; the Hölder convolution
//   G(a_1..a_w; 1) = Σ_j (-1)^j G(1-a_j, ..., 1-a_1; 1-q) G(a_(j+1)..a_w; q)
// moves both factors into their geometric regime for a suitable 0 < q <= 1.

#include <cmath>
#include <string>
#include <vector>

#include "invbinom/errors.hpp"
#include "invbinom/special_functions.hpp"

namespace invbinom {

MultiPolylogSpec MultiPolylogSpec::at_one(std::vector<int> s, std::vector<int> sigma) {
  MultiPolylogSpec spec;
  spec.s = std::move(s);
  spec.sigma = std::move(sigma);
  return spec;
}

MultiPolylogSpec MultiPolylogSpec::on_circle(std::vector<int> s, std::vector<int> sigma, const Angle& theta,
                                             mpfr_prec_t bits) {
  MultiPolylogSpec spec;
  spec.s = std::move(s);
  spec.sigma = std::move(sigma);
  Real t = theta.value(bits);
  spec.argument = Complex(cos(t), sin(t));
  return spec;
}

namespace {

struct Letter {
  Complex value;
  bool zero;
};
using Word = std::vector<Letter>;

Complex complex_one(mpfr_prec_t bits) { return {Real(1L, bits), Real(bits)}; }

// G(word; y) as (-1)^k Li_{m}(y/b_1, b_1/b_2, ...), word ending in a nonzero letter.
Complex g_function(const Word& word, const Real& y, mpfr_prec_t bits) {
  if (word.empty()) return complex_one(bits);
  if (y.is_zero()) return Complex(bits);

  std::vector<long> weights;
  std::vector<const Complex*> letters;
  long zeros = 0;
  for (const Letter& l : word) {
    if (l.zero) {
      ++zeros;
    } else {
      weights.push_back(zeros + 1);
      letters.push_back(&l.value);
      zeros = 0;
    }
  }
  const size_t depth = weights.size();

  std::vector<Complex> x;
  double rate = 0.0;
  for (size_t i = 0; i < depth; ++i) {
    const Complex& b = *letters[i];
    x.push_back(i == 0 ? Complex(y, Real(bits)) / b : *letters[i - 1] / b);
    rate = std::max(rate, (y / abs(b)).to_double());
  }
  if (rate >= 1.0) throw std::logic_error("g_function: nested sum outside its convergence region");

  const double per_term = -std::log(rate);
  double n_est = static_cast<double>(bits) * std::log(2.0) / per_term;
  for (int it = 0; it < 3; ++it) {
    n_est = (static_cast<double>(bits) * std::log(2.0) + static_cast<double>(depth) * std::log(n_est + 2.0)) /
            per_term;
  }
  const long terms = static_cast<long>(std::ceil(n_est)) + 10;

  // acc[d] = Σ_{n_d <= n} x_d^(n_d)/n_d^(m_d) acc[d+1](n_d - 1)
  std::vector<Complex> acc(depth, Complex(bits));
  std::vector<Complex> pw(depth, complex_one(bits));
  for (long n = 1; n <= terms; ++n) {
    const Real inv_n = 1L / Real(n, bits);
    for (size_t d = 0; d < depth; ++d) {
      pw[d] *= x[d];
      Complex t = pw[d] * pow(inv_n, static_cast<unsigned long>(weights[d]));
      if (d + 1 < depth) t *= acc[d + 1];
      acc[d] += t;
    }
  }
  Complex out = acc[0];
  if (depth % 2 == 1) out = -out;
  return out;
}

}  // namespace

ComplexValue multiple_polylog(const MultiPolylogSpec& spec, int digits) {
  if (digits < 10) throw DomainError("multiple_polylog: digits must be >= 10");
  if (spec.s.empty() || spec.s.size() != spec.sigma.size()) {
    throw DomainError("multiple_polylog: s and sigma must be nonempty and of equal length");
  }
  for (size_t i = 0; i < spec.s.size(); ++i) {
    if (spec.s[i] < 1) throw DomainError("multiple_polylog: weights must be positive");
    if (spec.sigma[i] != 1 && spec.sigma[i] != -1) throw DomainError("multiple_polylog: signs must be +1 or -1");
  }
  const mpfr_prec_t bits = bits_for_digits(working_digits(digits)) + 32;
  const Real tol = ldexp(Real(1L, bits), -static_cast<long>(bits / 2));

  Complex z(Real(spec.argument.re, bits), Real(spec.argument.im, bits));
  const Real modulus = abs(z);
  if (modulus > 1L + tol) throw DomainError("multiple_polylog: |argument| must be <= 1");
  if (abs(modulus - 1L) <= tol && spec.s[0] < 2) {
    throw DomainError("multiple_polylog: s_1 >= 2 required on the unit circle");
  }

  // Letters z_i = 1/(y_1 ⋯ y_i), y_1 = z σ_1, y_i = σ_i.
  Word word;
  Complex prefix = z;
  if (spec.sigma[0] < 0) prefix = -prefix;
  if (prefix.is_zero()) {
    return {BigReal(Real(bits), digits), BigReal(Real(bits), digits)};
  }
  for (size_t i = 0; i < spec.s.size(); ++i) {
    if (i > 0 && spec.sigma[i] < 0) prefix = -prefix;
    for (int zcount = 1; zcount < spec.s[i]; ++zcount) word.push_back({Complex(bits), true});
    word.push_back({inverse(prefix), false});
  }
  const size_t w = word.size();
  const size_t depth = spec.s.size();

  // Complemented letters 1 - a_l.
  Word complement;
  for (const Letter& l : word) {
    Complex c = complex_one(bits) - l.value;
    const bool zero = abs(c) <= tol;
    complement.push_back({zero ? Complex(bits) : std::move(c), zero});
  }

  double min_abs = 1e300;
  double min_abs_complement = 1e300;
  for (size_t l = 0; l < w; ++l) {
    if (!word[l].zero) min_abs = std::min(min_abs, abs(word[l].value).to_double());
    if (!complement[l].zero) min_abs_complement = std::min(min_abs_complement, abs(complement[l].value).to_double());
  }
  double best_q = 1.0;
  double best_rate = 1.0 / min_abs;
  for (int step = 1; step < 100; ++step) {
    const double q = step / 100.0;
    const double rate = std::max(q / min_abs, (1.0 - q) / min_abs_complement);
    if (rate < best_rate) {
      best_rate = rate;
      best_q = q;
    }
  }
  if (best_rate > 0.95) throw DomainError("multiple_polylog: argument too close to a singular configuration");

  Complex total(bits);
  if (best_q == 1.0) {
    total = g_function(word, Real(1L, bits), bits);
  } else {
    const Real q = Real::parse(std::to_string(best_q), bits);
    const Real q_complement = 1L - q;
    for (size_t j = 0; j <= w; ++j) {
      Word left;
      for (size_t l = j; l-- > 0;) left.push_back(complement[l]);
      Word right(word.begin() + static_cast<long>(j), word.end());
      Complex term = g_function(left, q_complement, bits) * g_function(right, q, bits);
      if (j % 2 == 1) term = -term;
      total += term;
    }
  }
  if (depth % 2 == 1) total = -total;
  return {BigReal(Real(total.re, bits), digits), BigReal(Real(total.im, bits), digits)};
}

}  // namespace invbinom
