#pragma once

// The weight-5 reduction table and its numerical verification: each row
// states a binomial sum as a rational combination of basis constants.

#include <string>
#include <vector>

#include <gmpxx.h>

#include "invbinom/constants.hpp"
#include "invbinom/nested_sums.hpp"
#include "invbinom/real.hpp"

namespace invbinom {

struct RhsTerm {
  mpq_class coeff;
  std::string constant;  // canonical registry name
};

struct Identity {
  std::string id;       // e.g. "angle_S4_over_j", "bracket_S1_over_j4"
  std::string display;  // e.g. "⟨S_4/j⟩"
  SumSpec lhs;
  std::vector<RhsTerm> rhs;
};

/// The 24 shipped identities in table order: 12 ⟨·⟩ rows, then 12 [·] rows.
const std::vector<Identity>& builtin_table();

/// Lookup by id; throws LookupError with near matches.
const Identity& find_identity(std::string_view id);

/// FNV-1a digest of the canonical text of a table.
std::string table_hash(const std::vector<Identity>& table = builtin_table());

/// Throws ConfigurationError for unregistered constants or weight mismatches.
void check_identity(const Identity& identity, const ConstantRegistry& registry = ConstantRegistry::builtin());

struct VerificationReport {
  std::string id;
  BigReal lhs;
  BigReal rhs;
  Real residual;
  int digits = 0;
  int truncation_index = 0;
  bool pass = false;
  double seconds = 0.0;
};

/// digits >= 20. pass iff residual < 10^-(digits-10).
VerificationReport verify_identity(const Identity& identity, int digits,
                                   ConstantEvaluator& evaluator = default_evaluator());

struct VerificationSummary {
  int digits = 0;
  int pass_count = 0;
  int fail_count = 0;
  Real max_residual;
  std::vector<VerificationReport> reports;  // table order
};

/// Verifies every identity, fanning out over `jobs` worker threads.
VerificationSummary verify_all(int digits, int jobs = 1, const std::vector<Identity>& table = builtin_table(),
                               ConstantEvaluator& evaluator = default_evaluator());

/// Shell-style glob with `*` and `?`.
bool glob_match(std::string_view pattern, std::string_view text);

std::vector<Identity> filter_table(const std::vector<Identity>& table, std::string_view pattern);

}  // namespace invbinom
