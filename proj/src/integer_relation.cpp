#include "invbinom/integer_relation.hpp"

#include <algorithm>
#include <cmath>

#include "invbinom/errors.hpp"

namespace invbinom {

int required_digits(size_t n, int max_coeff_bits) {
  return 20 + static_cast<int>((static_cast<long>(n) * max_coeff_bits + 2) / 3);
}

int supported_coeff_bits(size_t n, int digits) {
  if (n == 0 || digits <= 20) return 0;
  return std::min(64, static_cast<int>(3L * (digits - 20) / static_cast<long>(n)));
}

namespace {

using Matrix = std::vector<std::vector<Real>>;
using IntMatrix = std::vector<std::vector<mpz_class>>;

mpz_class nint(const Real& x) { return x.round_to_integer(); }

void normalize_sign_and_gcd(std::vector<mpz_class>& c) {
  mpz_class g = 0;
  for (const mpz_class& v : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g == 0) return;
  for (mpz_class& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  for (const mpz_class& v : c) {
    if (v == 0) continue;
    if (v < 0) {
      for (mpz_class& w : c) w = -w;
    }
    break;
  }
}

}  // namespace

RelationResult find_relation(const RelationProblem& problem) {
  const size_t n = problem.values.size();
  if (n < 2) throw DomainError("find_relation: need at least two values");
  if (problem.max_coeff_bits < 1) throw DomainError("find_relation: max_coeff_bits must be >= 1");
  const int need = required_digits(n, problem.max_coeff_bits);
  if (problem.digits < need) {
    throw PrecisionError("find_relation: " + std::to_string(n) + " values with coefficients up to 2^" +
                             std::to_string(problem.max_coeff_bits) + " need at least " + std::to_string(need) +
                             " digits, got " + std::to_string(problem.digits),
                         need);
  }

  const int D = problem.digits;
  const mpfr_prec_t bits = bits_for_digits(D) + 32;
  const Real gamma = 2L / sqrt(Real(3L, bits));
  // detection at 10^(-4D/5); certification at 10^(-D/2)
  const Real detect = ten_to_minus(D - D / 5, bits);
  const Real confirm = ten_to_minus(D / 2, bits);
  const mpz_class coeff_cap = mpz_class(1) << problem.max_coeff_bits;
  const Real norm_cap = Real(coeff_cap, bits) * sqrt(Real(static_cast<long>(n), bits));
  const long max_iterations = 64L * static_cast<long>(n * n) * problem.max_coeff_bits + 1000;

  std::vector<Real> x;
  for (const Real& v : problem.values) x.emplace_back(v, bits);

  // s_k = sqrt(Σ_{j>=k} x_j^2), scaled so s_0 = 1
  std::vector<Real> s(n, Real(bits));
  Real acc(bits);
  for (size_t k = n; k-- > 0;) {
    acc += x[k] * x[k];
    s[k] = sqrt(acc);
  }
  if (s[0].is_zero()) throw DomainError("find_relation: all values are zero");
  const Real s0 = s[0];
  std::vector<Real> y;
  for (size_t k = 0; k < n; ++k) {
    y.push_back(x[k] / s0);
    s[k] /= s0;
  }

  RelationResult result;
  result.norm_bound = Real(bits);
  auto finish_with_column = [&](const std::vector<mpz_class>& column, const std::string& reason) {
    std::vector<mpz_class> c = column;
    normalize_sign_and_gcd(c);
    Real residual(bits);
    mpz_class max_abs = 0;
    for (size_t i = 0; i < n; ++i) {
      residual += x[i] * Real(c[i], bits);
      max_abs = std::max<mpz_class>(max_abs, abs(c[i]));
    }
    residual = abs(residual);
    RelationVector rel{c, residual, residual < confirm && max_abs <= coeff_cap};
    result.stop_reason = reason;
    if (rel.confirmed) {
      result.relation = std::move(rel);
    } else {
      result.stop_reason += " (candidate rejected: " +
                            std::string(max_abs > coeff_cap ? "coefficients exceed bound" : "residual too large") +
                            ")";
    }
    return result;
  };

  Matrix H(n, std::vector<Real>(n - 1, Real(bits)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n - 1 && j <= i; ++j) {
      if (i == j) {
        H[i][j] = s[j + 1] / s[j];
      } else if (!s[j + 1].is_zero()) {
        H[i][j] = -(y[i] * y[j]) / (s[j] * s[j + 1]);
      }
    }
  }
  IntMatrix A(n, std::vector<mpz_class>(n, 0));
  IntMatrix B(n, std::vector<mpz_class>(n, 0));
  for (size_t i = 0; i < n; ++i) A[i][i] = B[i][i] = 1;

  auto reduce_entry = [&](size_t i, size_t j) {
    if (H[j][j].is_zero()) return;
    const mpz_class t = nint(H[i][j] / H[j][j]);
    if (t == 0) return;
    y[j] += y[i] * Real(t, bits);
    for (size_t k = 0; k <= j; ++k) H[i][k] -= H[j][k] * Real(t, bits);
    for (size_t k = 0; k < n; ++k) {
      A[i][k] -= t * A[j][k];
      B[k][j] += t * B[k][i];
    }
  };
  for (size_t i = 1; i < n; ++i) {
    for (size_t j = std::min(i, n - 1); j-- > 0;) reduce_entry(i, j);
  }

  auto column = [&](size_t c) {
    std::vector<mpz_class> out(n);
    for (size_t k = 0; k < n; ++k) out[k] = B[k][c];
    return out;
  };

  for (long it = 1; it <= max_iterations; ++it) {
    result.iterations = static_cast<int>(it);
    // 1. select m maximizing γ^i |H_ii|
    size_t m = 0;
    Real best(bits);
    Real gpow = gamma;
    for (size_t i = 0; i < n - 1; ++i) {
      Real v = gpow * abs(H[i][i]);
      if (i == 0 || v > best) {
        best = std::move(v);
        m = i;
      }
      gpow *= gamma;
    }
    // 2. exchange
    std::swap(y[m], y[m + 1]);
    std::swap(A[m], A[m + 1]);
    std::swap(H[m], H[m + 1]);
    for (size_t k = 0; k < n; ++k) std::swap(B[k][m], B[k][m + 1]);
    // 3. corner
    if (m + 2 < n) {
      const Real t0 = sqrt(H[m][m] * H[m][m] + H[m][m + 1] * H[m][m + 1]);
      if (!t0.is_zero()) {
        const Real t1 = H[m][m] / t0;
        const Real t2 = H[m][m + 1] / t0;
        for (size_t i = m; i < n; ++i) {
          const Real t3 = H[i][m];
          const Real t4 = H[i][m + 1];
          H[i][m] = t1 * t3 + t2 * t4;
          H[i][m + 1] = t1 * t4 - t2 * t3;
        }
      }
    }
    // 4. reduction
    for (size_t i = m + 1; i < n; ++i) {
      for (size_t j = std::min(i, m + 2); j-- > 0;) reduce_entry(i, j);
    }
    // 5. bound
    Real hmax(bits);
    bool zero_diagonal = false;
    for (size_t j = 0; j < n - 1; ++j) {
      if (H[j][j].is_zero()) zero_diagonal = true;
      Real v = abs(H[j][j]);
      if (v > hmax) hmax = std::move(v);
    }
    if (!hmax.is_zero()) {
      Real bound = 1L / hmax;
      if (bound > result.norm_bound) result.norm_bound = std::move(bound);
    }
    // 6. termination
    size_t imin = 0;
    for (size_t i = 1; i < n; ++i) {
      if (abs(y[i]) < abs(y[imin])) imin = i;
    }
    if (abs(y[imin]) < detect) return finish_with_column(column(imin), "relation detected");
    if (zero_diagonal) {
      // H_jj = 0 means an exact relation sits in the last column of B
      return finish_with_column(column(n - 1), "zero diagonal in H");
    }
    if (result.norm_bound > norm_cap) {
      result.stop_reason = "norm bound exceeds coefficient limit";
      return result;
    }
    bool overflow = false;
    for (size_t k = 0; k < n && !overflow; ++k) {
      for (size_t l = 0; l < n; ++l) {
        if (mpz_sizeinbase(A[k][l].get_mpz_t(), 2) > static_cast<size_t>(bits)) {
          overflow = true;
          break;
        }
      }
    }
    if (overflow) {
      result.stop_reason = "precision exhausted";
      return result;
    }
  }
  result.stop_reason = "iteration limit";
  return result;
}

std::vector<mpq_class> normalize_relation(const std::vector<mpz_class>& coeffs, size_t target) {
  if (target >= coeffs.size() || coeffs[target] == 0) {
    throw DomainError("normalize_relation: target coefficient is zero");
  }
  std::vector<mpq_class> out;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (i == target) continue;
    mpq_class r(-coeffs[i], coeffs[target]);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

Rediscovery rediscover(const Real& target, const std::vector<Real>& basis, int digits, int max_coeff_bits) {
  RelationProblem problem;
  problem.values.push_back(target);
  problem.values.insert(problem.values.end(), basis.begin(), basis.end());
  problem.digits = digits;
  problem.max_coeff_bits = max_coeff_bits;
  Rediscovery out;
  out.search = find_relation(problem);
  if (out.search.relation && out.search.relation->coeffs[0] != 0) {
    out.coefficients = normalize_relation(out.search.relation->coeffs, 0);
  }
  return out;
}

Rediscovery rediscover(const SumSpec& lhs, const std::vector<std::string>& basis_names, int digits,
                       int max_coeff_bits, ConstantEvaluator& evaluator) {
  if (basis_names.empty()) throw DomainError("rediscover: empty basis");
  // validate before the expensive evaluation
  const int need = required_digits(basis_names.size() + 1, max_coeff_bits);
  if (digits < need) {
    throw PrecisionError("rediscover: need at least " + std::to_string(need) + " digits, got " +
                             std::to_string(digits),
                         need);
  }
  std::vector<Real> basis;
  for (const std::string& name : basis_names) basis.push_back(evaluator.constant(name, digits).value);
  return rediscover(binomial_sum(lhs, digits).value, basis, digits, max_coeff_bits);
}

}  // namespace invbinom
