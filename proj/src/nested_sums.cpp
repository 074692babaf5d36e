#include "invbinom/nested_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "invbinom/errors.hpp"

namespace invbinom {

int SumSpec::weight() const {
  return std::accumulate(s_indices.begin(), s_indices.end(), 0) +
         std::accumulate(lambda_indices.begin(), lambda_indices.end(), 0) + c;
}

int SumSpec::max_harmonic_index() const {
  int m = 1;
  for (int a : s_indices) m = std::max(m, a);
  for (int b : lambda_indices) m = std::max(m, b);
  return m;
}

void SumSpec::validate() const {
  for (int a : s_indices) {
    if (a < 1) throw DomainError("SumSpec: harmonic index must be positive");
  }
  for (int b : lambda_indices) {
    if (b < 1) throw DomainError("SumSpec: lambda index must be positive");
  }
  if (c < 1) throw DomainError("SumSpec: denominator power c must be >= 1");
}

SumSpec SumSpec::canonical() const {
  SumSpec out = *this;
  std::sort(out.s_indices.begin(), out.s_indices.end());
  std::sort(out.lambda_indices.begin(), out.lambda_indices.end());
  return out;
}

HarmonicState::HarmonicState(int max_weight) {
  if (max_weight < 1) throw DomainError("HarmonicState: max_weight must be >= 1");
  s_.assign(static_cast<size_t>(max_weight), mpq_class(1));
  sbar_.assign(static_cast<size_t>(max_weight), mpq_class(1));
}

void HarmonicState::advance() {
  const long next = j_ + 1;
  for (size_t i = 0; i < s_.size(); ++i) {
    const auto a = static_cast<unsigned long>(i + 1);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(next), a);
    s_[i] += mpq_class(1, p);
    // S_a(2j+1) = S_a(2j-1) + (2j)^-a + (2j+1)^-a
    mpz_class p1, p2;
    mpz_ui_pow_ui(p1.get_mpz_t(), static_cast<unsigned long>(2 * j_), a);
    mpz_ui_pow_ui(p2.get_mpz_t(), static_cast<unsigned long>(2 * j_ + 1), a);
    sbar_[i] += mpq_class(p1 + p2, p1 * p2);
  }
  j_ = static_cast<int>(next);
}

mpq_class harmonic(int a, int j) {
  if (a < 1) throw DomainError("harmonic: weight must be >= 1");
  if (j < 0) throw DomainError("harmonic: index must be >= 0");
  mpq_class acc = 0;
  for (int l = 1; l <= j; ++l) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(l), static_cast<unsigned long>(a));
    acc += mpq_class(1, p);
  }
  return acc;
}

mpq_class sbar(int a, int j) {
  if (j < 1) throw DomainError("sbar: index must be >= 1");
  return harmonic(a, 2 * j - 1);
}

mpq_class lambda_from_sbar(int b, std::span<const mpq_class> sbar_values) {
  if (b < 1) throw DomainError("lambda: index must be >= 1");
  if (static_cast<int>(sbar_values.size()) < b) throw DomainError("lambda: not enough harmonic values");
  std::vector<mpq_class> coeff(static_cast<size_t>(b + 1));
  coeff[0] = 1;
  for (int n = 1; n <= b; ++n) {
    mpq_class acc = 0;
    for (int k = 1; k <= n; ++k) acc += sbar_values[static_cast<size_t>(k - 1)] * coeff[static_cast<size_t>(n - k)];
    coeff[static_cast<size_t>(n)] = acc / n;
  }
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(b));
  mpq_class out = coeff[static_cast<size_t>(b)] * fact;
  out.canonicalize();
  return out;
}

mpq_class lambda(int b, int j) {
  if (b < 1) throw DomainError("lambda: index must be >= 1");
  if (j < 1) throw DomainError("lambda: j must be >= 1");
  std::vector<mpq_class> values;
  for (int k = 1; k <= b; ++k) values.push_back(sbar(k, j));
  return lambda_from_sbar(b, values);
}

mpz_class central_binomial(int j) {
  if (j < 0) throw DomainError("central_binomial: j must be >= 0");
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), 2 * static_cast<unsigned long>(j), static_cast<unsigned long>(j));
  return out;
}

namespace {

constexpr mpfr_prec_t kBoundBits = 128;

// Majorant of |term_j|: 2√j / 4^j · Π_a (1 + ln 2j) · Π_b (b + ln 2j)^b / j^c,
// from C(2j,j) >= 4^j/(2√j), S_a(n) <= 1 + ln n, Λ_b <= L(L+1)⋯(L+b-1).
Real term_majorant(const SumSpec& spec, long j) {
  const Real jj(j, kBoundBits);
  const Real log2j = log(Real(2 * j, kBoundBits));
  Real m = ldexp(sqrt(jj), 1 - 2 * j);
  for (size_t i = 0; i < spec.s_indices.size(); ++i) m *= (log2j + 1L);
  for (int b : spec.lambda_indices) m *= pow(log2j + static_cast<long>(b), static_cast<unsigned long>(b));
  m /= pow(jj, static_cast<unsigned long>(spec.c));
  return m;
}

// Upper bound on majorant(j+1)/majorant(j), valid for every j >= from.
Real ratio_bound(const SumSpec& spec, long from) {
  const Real jj(from, kBoundBits);
  const Real step = log(1L + 1L / jj);
  const Real log2j = log(Real(2 * from, kBoundBits));
  Real r = ldexp(sqrt(1L + 1L / jj), -2);
  for (size_t i = 0; i < spec.s_indices.size(); ++i) r *= 1L + step / (log2j + 1L);
  for (int b : spec.lambda_indices) {
    r *= pow(1L + step / (log2j + static_cast<long>(b)), static_cast<unsigned long>(b));
  }
  return r;
}

}  // namespace

TailBound truncation_bound(const SumSpec& spec, int J) {
  spec.validate();
  if (J < 1) throw DomainError("truncation_bound: J must be >= 1");
  const Real r = ratio_bound(spec, J + 1);
  if (r >= Real(mpq_class(1, 3), kBoundBits)) {
    throw DomainError("truncation_bound: J = " + std::to_string(J) + " too small to bound the term ratio below 1/3");
  }
  Real bound = term_majorant(spec, J + 1) / (1L - r);
  if (spec.prefactor == Prefactor::sqrt3) bound *= 2L;  // √3 < 2
  return {J, std::move(bound)};
}

int truncation_index(const SumSpec& spec, int digits) {
  spec.validate();
  const Real target = ten_to_minus(digits, kBoundBits);
  // log10 of the majorant drops by about log10(4) per step
  int J = std::max(8, static_cast<int>(digits / std::log10(4.0)));
  auto ok = [&](int candidate) {
    try {
      return truncation_bound(spec, candidate).bound < target;
    } catch (const DomainError&) {
      return false;
    }
  };
  while (!ok(J)) J += std::max(1, J / 16);
  while (J > 1 && ok(J - 1)) --J;
  return J;
}

Real binomial_partial_sum(const SumSpec& spec, int J, mpfr_prec_t bits) {
  spec.validate();
  HarmonicState state(spec.max_harmonic_index());
  std::vector<mpq_class> s_prev(static_cast<size_t>(state.max_weight()), mpq_class(0));  // S_a(j-1)
  mpz_class binom = 2;                                                                    // C(2j, j)

  // Neumaier-compensated accumulation.
  Real sum(bits);
  Real comp(bits);
  for (int j = 1; j <= J; ++j) {
    mpq_class numerator = 1;
    for (int a : spec.s_indices) numerator *= s_prev[static_cast<size_t>(a - 1)];
    for (int b : spec.lambda_indices) numerator *= lambda_from_sbar(b, state.sbar_values());

    if (numerator != 0) {
      mpz_class denom = binom;
      mpz_class jc;
      mpz_ui_pow_ui(jc.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(spec.c));
      denom *= jc;
      Real term(numerator, bits);
      term /= denom;
      Real t = sum + term;
      if (abs(sum) >= abs(term)) {
        comp += (sum - t) + term;
      } else {
        comp += (term - t) + sum;
      }
      sum = std::move(t);
    }

    for (int a = 1; a <= state.max_weight(); ++a) s_prev[static_cast<size_t>(a - 1)] = state.s(a);
    state.advance();
    // C(2j+2, j+1) = C(2j, j) (2j+1)(2j+2)/(j+1)^2
    binom *= (2 * j + 1) * (2 * j + 2);
    mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(j + 1) * (j + 1));
  }
  sum += comp;
  if (spec.prefactor == Prefactor::sqrt3) sum *= sqrt(Real(3L, bits));
  return sum;
}

BinomialSumResult binomial_sum_detailed(const SumSpec& spec, int digits) {
  spec.validate();
  if (digits < 10) throw DomainError("binomial_sum: digits must be >= 10");
  const int wd = working_digits(digits);
  const int J = truncation_index(spec, wd);
  return {BigReal(binomial_partial_sum(spec, J, bits_for_digits(wd)), digits), J};
}

BigReal binomial_sum(const SumSpec& spec, int digits) { return binomial_sum_detailed(spec, digits).value; }

SumSpec parse_sum_spec(std::string_view text) {
  static const std::string grammar = "expected `[sqrt3] S<a>... L<b>... / j^<c>`";
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);

  auto parse_positive = [&](const std::string& digits, const std::string& tok) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 3) {
      throw std::invalid_argument("bad token '" + tok + "': " + grammar);
    }
    int v = std::stoi(digits);
    if (v < 1) throw std::invalid_argument("index must be positive in '" + tok + "': " + grammar);
    return v;
  };

  SumSpec spec;
  size_t i = 0;
  if (i < tokens.size() && tokens[i] == "sqrt3") {
    spec.prefactor = Prefactor::sqrt3;
    ++i;
  }
  for (; i < tokens.size() && tokens[i] != "/"; ++i) {
    const std::string& tok = tokens[i];
    if (tok.size() >= 2 && tok[0] == 'S') {
      spec.s_indices.push_back(parse_positive(tok.substr(1), tok));
    } else if (tok.size() >= 2 && tok[0] == 'L') {
      spec.lambda_indices.push_back(parse_positive(tok.substr(1), tok));
    } else {
      throw std::invalid_argument("unexpected token '" + tok + "': " + grammar);
    }
  }
  if (i + 2 != tokens.size() || tokens[i] != "/" || tokens[i + 1].rfind("j^", 0) != 0) {
    throw std::invalid_argument("missing denominator: " + grammar);
  }
  spec.c = parse_positive(tokens[i + 1].substr(2), tokens[i + 1]);
  return spec.canonical();
}

std::string format_sum_spec(const SumSpec& spec) {
  std::string out;
  if (spec.prefactor == Prefactor::sqrt3) out += "sqrt3 ";
  for (int a : spec.s_indices) out += "S" + std::to_string(a) + " ";
  for (int b : spec.lambda_indices) out += "L" + std::to_string(b) + " ";
  return out + "/ j^" + std::to_string(spec.c);
}

}  // namespace invbinom
