#pragma once

// PSLQ integer relation detection (Ferguson–Bailey formulation, γ = 2/√3)
// and reconstruction of rational reduction coefficients.

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "invbinom/constants.hpp"
#include "invbinom/nested_sums.hpp"
#include "invbinom/real.hpp"

namespace invbinom {

struct RelationProblem {
  std::vector<Real> values;  // each accurate to `digits`
  int max_coeff_bits = 40;
  int digits = 0;
};

struct RelationVector {
  std::vector<mpz_class> coeffs;  // gcd 1, first nonzero entry positive
  Real residual;                  // |Σ c_i v_i| re-evaluated at full precision
  bool confirmed = false;         // residual < 10^(-D/2) and max|c| <= 2^max_coeff_bits
};

struct RelationResult {
  std::optional<RelationVector> relation;  // set only when confirmed
  /// Lower bound on the Euclidean norm of any integer relation, from the
  /// final H matrix (meaningful when no relation was returned).
  Real norm_bound;
  int iterations = 0;
  std::string stop_reason;
};

/// Smallest D accepted for n values and a coefficient bound: 20 + ceil(n·bits/3).
int required_digits(size_t n, int max_coeff_bits);

/// Largest coefficient bound (capped at 64 bits) that `digits` supports for n values.
int supported_coeff_bits(size_t n, int digits);

/// Throws PrecisionError when problem.digits < required_digits, DomainError
/// for n < 2 or an all-zero vector. Deterministic.
RelationResult find_relation(const RelationProblem& problem);

struct Rediscovery {
  /// Right-hand coefficients with the target normalized to -1, i.e.
  /// target = Σ coefficients[i] · basis[i].
  std::optional<std::vector<mpq_class>> coefficients;
  RelationResult search;
};

/// Rationals from an integer relation whose entry `target` is nonzero:
/// r_i = -c_i / c_target for i != target, in lowest terms.
std::vector<mpq_class> normalize_relation(const std::vector<mpz_class>& coeffs, size_t target);

Rediscovery rediscover(const Real& target, const std::vector<Real>& basis, int digits, int max_coeff_bits);
Rediscovery rediscover(const SumSpec& lhs, const std::vector<std::string>& basis_names, int digits,
                       int max_coeff_bits, ConstantEvaluator& evaluator = default_evaluator());

}  // namespace invbinom
