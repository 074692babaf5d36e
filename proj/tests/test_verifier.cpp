#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "invbinom/errors.hpp"
#include "invbinom/verifier.hpp"
#include "oracles.hpp"

using namespace invbinom;

TEST_CASE("table shape") {
  const auto& table = builtin_table();
  REQUIRE(table.size() == 24);
  std::set<std::string> ids;
  int angle = 0, bracket = 0;
  for (const Identity& row : table) {
    ids.insert(row.id);
    CHECK(row.lhs.weight() == 5);
    CHECK_FALSE(row.rhs.empty());
    if (row.lhs.prefactor == Prefactor::sqrt3) {
      ++angle;
      CHECK(row.lhs.c == 1);
    } else {
      ++bracket;
    }
    CHECK_NOTHROW(check_identity(row));
  }
  CHECK(ids.size() == 24);
  CHECK(angle == 12);
  CHECK(bracket == 12);
}

TEST_CASE("sample rows carry the expected coefficients") {
  const Identity& s4 = find_identity("angle_S4_over_j");
  REQUIRE(s4.rhs.size() == 4);
  CHECK(s4.rhs[0].coeff == mpq_class(4, 9));
  CHECK(s4.rhs[0].constant == "omega_3_5");
  CHECK(s4.rhs[1].coeff == mpq_class(155, 54));
  CHECK(s4.rhs[1].constant == "omega_4_5");
  CHECK(s4.rhs[2].coeff == mpq_class(-2, 3));
  CHECK(s4.rhs[3].coeff == mpq_class(8, 3));

  const Identity& b = find_identity("bracket_S1_over_j4");
  CHECK(b.lhs == (SumSpec{{1}, {}, 4, Prefactor::none}));
  REQUIRE(b.rhs.size() == 3);
  CHECK(b.rhs[0].coeff == mpq_class(-28, 81));
  CHECK(b.rhs[2].coeff == mpq_class(134, 27));

  const Identity& l4 = find_identity("angle_L4_over_j");
  CHECK(l4.lhs.lambda_indices == std::vector<int>{4});
  CHECK(l4.rhs[0].constant == "C_5");
  CHECK(l4.rhs[0].coeff == 28);

  CHECK_THROWS_AS(find_identity("angle_S5_over_j"), LookupError);
}

TEST_CASE("a single identity verifies at 50 digits") {
  const VerificationReport r = verify_identity(find_identity("angle_S4_over_j"), 50);
  CHECK(r.pass);
  CHECK(r.digits == 50);
  CHECK(r.truncation_index > 70);
  CHECK(r.residual < ten_to_minus(40, 256));
  CHECK(oracle::agree(r.lhs.value, r.rhs.value, 45));
}

TEST_CASE("a perturbed coefficient is detected") {
  Identity bad = find_identity("bracket_L1_over_j4");
  bad.rhs[1].coeff += mpq_class(1, 1000000);
  const VerificationReport r = verify_identity(bad, 30);
  CHECK_FALSE(r.pass);
  CHECK(r.residual > ten_to_minus(10, 256));

  Identity swapped = find_identity("bracket_L1_over_j4");
  swapped.rhs[0].constant = "sigma_2_5";
  CHECK_FALSE(verify_identity(swapped, 30).pass);
}

TEST_CASE("misconfigured rows are rejected") {
  Identity bad = find_identity("bracket_S1_over_j4");
  bad.rhs[0].constant = "no_such_constant";
  CHECK_THROWS_AS(check_identity(bad), ConfigurationError);
  bad.rhs[0].constant = "omega_4_4";
  CHECK_THROWS_AS(check_identity(bad), ConfigurationError);
  CHECK_THROWS_AS(verify_identity(find_identity("bracket_S1_over_j4"), 19), DomainError);
}

TEST_CASE("whole table at 30 digits, serial and parallel agree") {
  const VerificationSummary one = verify_all(30, 1);
  CHECK(one.pass_count == 24);
  CHECK(one.fail_count == 0);
  CHECK(one.max_residual < ten_to_minus(20, 256));
  const VerificationSummary four = verify_all(30, 4);
  REQUIRE(four.reports.size() == one.reports.size());
  for (size_t i = 0; i < one.reports.size(); ++i) {
    CHECK(four.reports[i].id == one.reports[i].id);
    CHECK(four.reports[i].lhs.str() == one.reports[i].lhs.str());
    CHECK(four.reports[i].residual == one.reports[i].residual);
  }
  CHECK(one.reports.front().id == builtin_table().front().id);
  CHECK_THROWS_AS(verify_all(30, 0), DomainError);
}

TEST_CASE("empty table") {
  const VerificationSummary s = verify_all(20, 2, {});
  CHECK(s.pass_count == 0);
  CHECK(s.fail_count == 0);
  CHECK(s.reports.empty());
}

TEST_CASE("table hash is stable and content sensitive") {
  const std::string h = table_hash();
  CHECK(h.size() == 16);
  CHECK(h == table_hash(builtin_table()));
  auto copy = builtin_table();
  copy[3].rhs[0].coeff += 1;
  CHECK(table_hash(copy) != h);
}

TEST_CASE("glob matching and filtering") {
  CHECK(glob_match("*", "anything"));
  CHECK(glob_match("angle_*", "angle_S4_over_j"));
  CHECK_FALSE(glob_match("angle_*", "bracket_S1_over_j4"));
  CHECK(glob_match("bracket_S?_over_j?", "bracket_S1_over_j4"));
  CHECK_FALSE(glob_match("bracket_S?_over_j?", "bracket_S1S2_over_j2"));
  CHECK(glob_match("", ""));
  CHECK_FALSE(glob_match("", "x"));
  CHECK(filter_table(builtin_table(), "angle_*").size() == 12);
  CHECK(filter_table(builtin_table(), "*L*").size() == 14);
  CHECK(filter_table(builtin_table(), "nothing").empty());
}
