#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invbinom/errors.hpp"
#include "invbinom/integer_relation.hpp"
#include "invbinom/verifier.hpp"

using namespace invbinom;

namespace {

std::vector<mpz_class> Z(std::initializer_list<long> v) {
  std::vector<mpz_class> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

std::vector<mpq_class> table_coefficients(const Identity& id) {
  std::vector<mpq_class> out;
  for (const RhsTerm& t : id.rhs) out.push_back(t.coeff);
  return out;
}

std::vector<std::string> table_basis(const Identity& id) {
  std::vector<std::string> out;
  for (const RhsTerm& t : id.rhs) out.push_back(t.constant);
  return out;
}

}  // namespace

TEST_CASE("precision requirements") {
  CHECK(required_digits(5, 40) == 20 + 67);
  CHECK(required_digits(11, 40) == 20 + 147);
  CHECK(supported_coeff_bits(11, 167) == 40);
  CHECK(supported_coeff_bits(3, 20) == 0);
  CHECK(supported_coeff_bits(2, 10000) == 64);
  RelationProblem p;
  const mpfr_prec_t b = bits_for_digits(40);
  p.values = {Real(1L, b), sqrt(Real(2L, b))};
  p.digits = 40;
  p.max_coeff_bits = 40;
  CHECK_THROWS_AS(find_relation(p), PrecisionError);
  try {
    (void)find_relation(p);
  } catch (const PrecisionError& e) {
    CHECK(e.required_digits() == required_digits(2, 40));
  }
  p.values.resize(1);
  CHECK_THROWS_AS(find_relation(p), DomainError);
}

TEST_CASE("golden ratio: phi^2 - phi - 1 = 0") {
  const int D = 60;
  const mpfr_prec_t b = bits_for_digits(D + 10);
  const Real phi = (1L + sqrt(Real(5L, b))) / 2L;
  RelationProblem p{{phi * phi, phi, Real(1L, b)}, 20, D};
  const RelationResult r = find_relation(p);
  REQUIRE(r.relation.has_value());
  CHECK(r.relation->coeffs == Z({1, -1, -1}));
  CHECK(r.relation->confirmed);
  CHECK(r.relation->residual < ten_to_minus(D / 2, b));
}

TEST_CASE("relation is scale invariant and sign normalized") {
  const int D = 60;
  const mpfr_prec_t b = bits_for_digits(D + 10);
  const Real x = log(Real(2L, b));
  const Real y = log(Real(3L, b));
  const Real z = log(Real(12L, b));  // 2 ln 2 + ln 3
  for (long scale : {1L, -7L, 1000L}) {
    RelationProblem p{{z * scale, x * scale, y * scale}, 20, D};
    const RelationResult r = find_relation(p);
    REQUIRE(r.relation.has_value());
    CAPTURE(scale);
    CHECK(r.relation->coeffs == Z({1, -2, -1}));
  }
}

TEST_CASE("no false positive among independent constants") {
  const int D = 120;
  const mpfr_prec_t b = bits_for_digits(D + 10);
  RelationProblem p{{sqrt(Real(2L, b)), sqrt(Real(3L, b)), sqrt(Real(5L, b)), pi(b), exp(Real(1L, b))}, 20, D};
  const RelationResult r = find_relation(p);
  CHECK_FALSE(r.relation.has_value());
  // any relation would need coefficients beyond the bound
  CHECK(r.norm_bound > Real(mpz_class(mpz_class(1) << 20), b));
}

TEST_CASE("every returned relation is sound") {
  const int D = 80;
  const mpfr_prec_t b = bits_for_digits(D + 10);
  const Real a = pi(b);
  const Real c = log(Real(2L, b));
  RelationProblem p{{a * 3L - c * 5L + 7L, a, c, Real(1L, b)}, 20, D};
  const RelationResult r = find_relation(p);
  REQUIRE(r.relation.has_value());
  Real check(b);
  for (size_t i = 0; i < p.values.size(); ++i) check += p.values[i] * Real(r.relation->coeffs[i], b);
  CHECK(abs(check) < ten_to_minus(D / 2, b));
  CHECK(r.relation->coeffs == Z({1, -3, 5, -7}));
}

TEST_CASE("normalize_relation") {
  const auto q = normalize_relation(Z({-54, 24, 155, -36, 144}), 0);
  REQUIRE(q.size() == 4);
  CHECK(q[0] == mpq_class(4, 9));
  CHECK(q[1] == mpq_class(155, 54));
  CHECK(q[2] == mpq_class(-2, 3));
  CHECK(q[3] == mpq_class(8, 3));
  CHECK_THROWS_AS(normalize_relation(Z({0, 1}), 0), DomainError);
}

TEST_CASE("rediscovery of the ⟨S_4/j⟩ row") {
  const Identity& id = find_identity("angle_S4_over_j");
  const int D = 120;
  const Rediscovery r = rediscover(id.lhs, table_basis(id), D, 40);
  REQUIRE(r.coefficients.has_value());
  CHECK(*r.coefficients == table_coefficients(id));
  REQUIRE(r.search.relation.has_value());
  // integer form proportional to (-54, 24, 155, -36, 144)
  CHECK(r.search.relation->coeffs == Z({54, -24, -155, 36, -144}));
}

TEST_CASE("rediscovery of the [S_1/j^4] row") {
  const Identity& id = find_identity("bracket_S1_over_j4");
  const Rediscovery r = rediscover(id.lhs, table_basis(id), 100, 40);
  REQUIRE(r.coefficients.has_value());
  CHECK(*r.coefficients == table_coefficients(id));
}

TEST_CASE("incomplete basis yields no relation") {
  const Identity& id = find_identity("angle_S4_over_j");
  std::vector<std::string> basis = table_basis(id);
  basis.pop_back();  // drop ω_9
  const Rediscovery r = rediscover(id.lhs, basis, 120, 40);
  CHECK_FALSE(r.coefficients.has_value());
  CHECK_FALSE(r.search.stop_reason.empty());
}

TEST_CASE("rediscovery refuses insufficient precision before evaluating") {
  const Identity& id = find_identity("angle_S1S1S1S1_over_j");
  CHECK_THROWS_AS(rediscover(id.lhs, table_basis(id), 60, 40), PrecisionError);
  CHECK_THROWS_AS(rediscover(id.lhs, {}, 60, 40), DomainError);
}

TEST_CASE("determinism") {
  const mpfr_prec_t b = bits_for_digits(70);
  const Real phi = (1L + sqrt(Real(5L, b))) / 2L;
  RelationProblem p{{phi * phi, phi, Real(1L, b)}, 20, 60};
  const RelationResult a = find_relation(p);
  const RelationResult c = find_relation(p);
  CHECK(a.iterations == c.iterations);
  CHECK(a.relation->coeffs == c.relation->coeffs);
}
