#pragma once

// Harmonic sums, the Λ combinations of doubled-argument harmonic sums, and
// multiple inverse binomial sums
//
//   Σ_{j>=1} S_a1(j-1) ⋯ S_ap(j-1) Λ_b1(j) ⋯ Λ_bq(j) / (C(2j, j) j^c),
//
// optionally multiplied by √3. Everything up to the assembled numerator of
// each term is exact rational arithmetic.

#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "invbinom/real.hpp"

namespace invbinom {

enum class Prefactor { none, sqrt3 };

struct SumSpec {
  std::vector<int> s_indices;       // S_a factors, evaluated at j-1
  std::vector<int> lambda_indices;  // Λ_b factors, built from S_k(2j-1)
  int c = 1;                        // power of j in the denominator
  Prefactor prefactor = Prefactor::none;

  /// Σ a + Σ b + c: the transcendental weight of the sum's value.
  int weight() const;
  /// Largest harmonic index any factor needs (Λ_b needs S̄_1..S̄_b).
  int max_harmonic_index() const;
  /// Throws DomainError for nonpositive indices or c < 1.
  void validate() const;
  /// Sorts the index multisets.
  SumSpec canonical() const;

  friend bool operator==(const SumSpec&, const SumSpec&) = default;
};

/// Incremental harmonic data at index j: S_a(j) and S̄_a(j) = S_a(2j-1) for
/// a = 1..max_weight, updated in O(1) rational additions per weight.
class HarmonicState {
 public:
  explicit HarmonicState(int max_weight);

  int j() const { return j_; }
  int max_weight() const { return static_cast<int>(s_.size()); }
  const mpq_class& s(int a) const { return s_.at(static_cast<size_t>(a - 1)); }
  const mpq_class& sbar(int a) const { return sbar_.at(static_cast<size_t>(a - 1)); }
  std::span<const mpq_class> sbar_values() const { return sbar_; }

  void advance();

 private:
  int j_ = 1;
  std::vector<mpq_class> s_;
  std::vector<mpq_class> sbar_;
};

/// S_a(j) = Σ_{l=1}^j l^-a; S_a(0) = 0.
mpq_class harmonic(int a, int j);
/// S_a(2j-1).
mpq_class sbar(int a, int j);
/// Λ_b from S̄_1..S̄_b via B_n = (1/n) Σ_k S̄_k B_(n-k), Λ_n = n! B_n.
mpq_class lambda_from_sbar(int b, std::span<const mpq_class> sbar_values);
mpq_class lambda(int b, int j);
mpz_class central_binomial(int j);

struct TailBound {
  int J;
  Real bound;  // proven majorant of |Σ_{j>J} term_j|
};

/// Geometric majorant of the tail beyond J. Throws DomainError when J is
/// too small for the ratio bound to drop below 1/3.
TailBound truncation_bound(const SumSpec& spec, int J);

/// Smallest J whose tail bound is below 10^-digits.
int truncation_index(const SumSpec& spec, int digits);

/// Partial sum Σ_{j=1}^{J} of the series (prefactor included) at `bits`.
Real binomial_partial_sum(const SumSpec& spec, int J, mpfr_prec_t bits);

struct BinomialSumResult {
  BigReal value;
  int truncation_index;
};

BinomialSumResult binomial_sum_detailed(const SumSpec& spec, int digits);
BigReal binomial_sum(const SumSpec& spec, int digits);

/// Spec-string grammar: `[sqrt3] S<a>... L<b>... / j^<c>`, e.g.
/// "sqrt3 S4 / j^1", "S1 S1 S1 / j^2", "/ j^2". Throws std::invalid_argument.
SumSpec parse_sum_spec(std::string_view text);
std::string format_sum_spec(const SumSpec& spec);

}  // namespace invbinom
