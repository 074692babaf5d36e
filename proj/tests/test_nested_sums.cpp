#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "invbinom/errors.hpp"
#include "invbinom/nested_sums.hpp"
#include "oracles.hpp"

using namespace invbinom;

namespace {

mpq_class brute_harmonic(int a, int n) {
  mpq_class s = 0;
  for (int l = 1; l <= n; ++l) {
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(l), static_cast<unsigned long>(a));
    s += mpq_class(1, d);
  }
  s.canonicalize();
  return s;
}

mpz_class factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

// term_j of the series, exact
mpq_class exact_term(const SumSpec& spec, int j) {
  mpq_class t = 1;
  for (int a : spec.s_indices) t *= brute_harmonic(a, j - 1);
  for (int b : spec.lambda_indices) t *= lambda(b, j);
  mpz_class jc;
  mpz_ui_pow_ui(jc.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(spec.c));
  t /= central_binomial(j) * jc;
  return t;
}

}  // namespace

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(1, 9) == mpq_class(7129, 2520));
  CHECK(harmonic(3, 10) == mpq_class(mpz_class("19164113947"), mpz_class("16003008000")));
  CHECK(harmonic(2, 0) == 0);
  CHECK(sbar(1, 1) == 1);
  CHECK(sbar(2, 3) == brute_harmonic(2, 5));
  CHECK_THROWS_AS(harmonic(0, 3), DomainError);
  CHECK_THROWS_AS(sbar(1, 0), DomainError);
}

TEST_CASE("Lambda matches the explicit polynomials in the doubled harmonic sums") {
  std::mt19937 rng(20240611u);
  std::uniform_int_distribution<int> pick(1, 150);
  for (int trial = 0; trial < 25; ++trial) {
    const int j = pick(rng);
    CAPTURE(j);
    const mpq_class s1 = brute_harmonic(1, 2 * j - 1);
    const mpq_class s2 = brute_harmonic(2, 2 * j - 1);
    const mpq_class s3 = brute_harmonic(3, 2 * j - 1);
    const mpq_class s4 = brute_harmonic(4, 2 * j - 1);
    CHECK(lambda(1, j) == s1);
    CHECK(lambda(2, j) == s2 + s1 * s1);
    CHECK(lambda(3, j) == s1 * s1 * s1 + 3 * s1 * s2 + 2 * s3);
    CHECK(lambda(4, j) == s1 * s1 * s1 * s1 + 6 * s1 * s1 * s2 + 3 * s2 * s2 + 8 * s1 * s3 + 6 * s4);
  }
}

TEST_CASE("Lambda at j = 1 equals b factorial") {
  for (int b = 1; b <= 6; ++b) CHECK(lambda(b, 1) == mpq_class(factorial(b)));
  CHECK_THROWS_AS(lambda(0, 3), DomainError);
  CHECK_THROWS_AS(lambda(2, 0), DomainError);
}

TEST_CASE("central binomial coefficients") {
  for (int j = 0; j <= 60; ++j) {
    CAPTURE(j);
    CHECK(central_binomial(j) == factorial(2 * j) / (factorial(j) * factorial(j)));
  }
  CHECK_THROWS_AS(central_binomial(-1), DomainError);
}

TEST_CASE("HarmonicState tracks the direct definitions") {
  HarmonicState st(4);
  for (int j = 1; j <= 40; ++j) {
    REQUIRE(st.j() == j);
    for (int a = 1; a <= 4; ++a) {
      CHECK(st.s(a) == harmonic(a, j));
      CHECK(st.sbar(a) == sbar(a, j));
    }
    for (int b = 1; b <= 4; ++b) CHECK(lambda_from_sbar(b, st.sbar_values()) == lambda(b, j));
    st.advance();
  }
  CHECK_THROWS_AS(HarmonicState(0), DomainError);
}

TEST_CASE("SumSpec weight, validation and canonical form") {
  const SumSpec spec{{3, 1}, {2}, 2, Prefactor::none};
  CHECK(spec.weight() == 8);
  CHECK(spec.max_harmonic_index() == 3);
  CHECK(spec.canonical().s_indices == std::vector<int>{1, 3});
  CHECK_THROWS_AS((SumSpec{{0}, {}, 1, Prefactor::none}).validate(), DomainError);
  CHECK_THROWS_AS((SumSpec{{}, {}, 0, Prefactor::none}).validate(), DomainError);
}

TEST_CASE("term ratio approaches one quarter") {
  const SumSpec spec{{1, 1}, {2}, 2, Prefactor::none};
  for (int j = 50; j <= 80; j += 10) {
    const mpq_class r = exact_term(spec, j + 1) / exact_term(spec, j);
    CAPTURE(j);
    CHECK(r > mpq_class(1, 5));
    CHECK(r < mpq_class(3, 10));
  }
}

TEST_CASE("tail bound majorizes the true tail") {
  const SumSpec spec{{}, {}, 2, Prefactor::none};
  const TailBound tb = truncation_bound(spec, 200);
  CHECK(tb.bound < Real::parse("1e-110", 256));
  CHECK(tb.bound > 0L);

  for (const SumSpec& s : {SumSpec{{1, 1, 1}, {}, 2, Prefactor::none}, SumSpec{{}, {4}, 1, Prefactor::none},
                           SumSpec{{2}, {1, 1}, 1, Prefactor::none}}) {
    const int J = 60;
    const TailBound b = truncation_bound(s, J);
    mpq_class tail = 0;
    for (int j = J + 1; j <= J + 80; ++j) tail += exact_term(s, j);
    CHECK(Real(tail, 256) < b.bound);
    // the bound is not absurdly loose
    CHECK(b.bound < Real(tail, 256) * 1000L);
  }
  CHECK_THROWS_AS(truncation_bound(SumSpec{{1, 1, 1, 1}, {}, 1, Prefactor::none}, 1), DomainError);
}

TEST_CASE("truncation index grows linearly with the digit count") {
  const SumSpec spec{{1}, {1}, 2, Prefactor::none};
  const int j50 = truncation_index(spec, 50);
  const int j100 = truncation_index(spec, 100);
  CHECK(j50 > 70);
  CHECK(j100 > j50);
  CHECK(truncation_bound(spec, j50).bound < Real::parse("1e-50", 256));
  CHECK(truncation_bound(spec, j50 - 1).bound >= Real::parse("1e-50", 256));
}

TEST_CASE("partial sums against exact rational partial sums") {
  const SumSpec spec{{1, 2}, {1}, 2, Prefactor::none};
  mpq_class exact = 0;
  for (int j = 1; j <= 40; ++j) exact += exact_term(spec, j);
  CHECK(oracle::agree(binomial_partial_sum(spec, 40, 400), Real(exact, 400), 110));
}

TEST_CASE("Σ 1/(C(2j,j) j^2) = π²/18") {
  const BigReal v = binomial_sum(SumSpec{{}, {}, 2, Prefactor::none}, 60);
  const mpfr_prec_t b = bits_for_digits(80);
  CHECK(oracle::agree(v.value, pow(pi(b), 2) / 18L, 60));
  // Σ 1/(C(2j,j) j) = π√3/9
  const BigReal w = binomial_sum(SumSpec{{}, {}, 1, Prefactor::none}, 60);
  CHECK(oracle::agree(w.value, pi(b) * sqrt(Real(3L, b)) / 9L, 60));
}

TEST_CASE("sqrt3 prefactor multiplies the value") {
  const SumSpec plain{{1}, {}, 3, Prefactor::none};
  SumSpec scaled = plain;
  scaled.prefactor = Prefactor::sqrt3;
  const mpfr_prec_t b = bits_for_digits(60);
  CHECK(oracle::agree(binomial_sum(scaled, 40).value, binomial_sum(plain, 40).value * sqrt(Real(3L, b)), 40));
}

TEST_CASE("binomial sums are stable under precision doubling and deterministic") {
  const SumSpec spec{{1, 1}, {2}, 1, Prefactor::none};
  const BinomialSumResult a = binomial_sum_detailed(spec, 50);
  const BinomialSumResult b = binomial_sum_detailed(spec, 100);
  CHECK(b.truncation_index > a.truncation_index);
  CHECK(oracle::agree(a.value.value, b.value.value, 50));
  CHECK(binomial_sum(spec, 50).str() == a.value.str());
  CHECK_THROWS_AS(binomial_sum(spec, 5), DomainError);
}

TEST_CASE("spec-string parsing and formatting") {
  const SumSpec s = parse_sum_spec("sqrt3 S4 / j^1");
  CHECK(s.prefactor == Prefactor::sqrt3);
  CHECK(s.s_indices == std::vector<int>{4});
  CHECK(s.c == 1);
  const SumSpec t = parse_sum_spec("S1 S1 L2 / j^3");
  CHECK(t.s_indices == std::vector<int>{1, 1});
  CHECK(t.lambda_indices == std::vector<int>{2});
  CHECK(t.c == 3);
  CHECK(parse_sum_spec("/ j^2").weight() == 2);
  for (const char* text : {"sqrt3 S4 / j^1", "S1 S1 L2 / j^3", "/ j^2", "S2 L1 L1 / j^2"}) {
    CHECK(parse_sum_spec(format_sum_spec(parse_sum_spec(text))) == parse_sum_spec(text));
  }
  CHECK_THROWS_AS(parse_sum_spec("S1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sum_spec("S0 / j^2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sum_spec("X1 / j^2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sum_spec("S1 / j^2 S2"), std::invalid_argument);
}
