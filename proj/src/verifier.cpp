#include "invbinom/verifier.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <sstream>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "invbinom/errors.hpp"

namespace invbinom {

namespace {

RhsTerm t(long num, long den, const char* constant) {
  mpq_class c(num, den);
  c.canonicalize();
  return {c, constant};
}
RhsTerm t(long num, const char* constant) { return {mpq_class(num), constant}; }

SumSpec angle(std::vector<int> s, std::vector<int> l) { return SumSpec{std::move(s), std::move(l), 1, Prefactor::sqrt3}; }
SumSpec bracket(std::vector<int> s, std::vector<int> l, int c) {
  return SumSpec{std::move(s), std::move(l), c, Prefactor::none};
}

constexpr const char* w3 = "omega_3_5";
constexpr const char* w5 = "omega_5_5";
constexpr const char* w6 = "omega_6_5";
constexpr const char* w7 = "omega_7_5";
constexpr const char* w8 = "omega_8_5";
constexpr const char* w9 = "omega_9_5";
constexpr const char* w10 = "omega_10_5";
constexpr const char* pz4 = "omega_4_5";  // π ζ_4
constexpr const char* s1 = "sigma_1_5";
constexpr const char* s2 = "sigma_2_5";
constexpr const char* s3 = "sigma_3_5";
constexpr const char* z23 = "zeta_2_zeta_3";
constexpr const char* z5 = "zeta_5";
constexpr const char* x5 = "chi_5";

std::vector<Identity> make_table() {
  std::vector<Identity> table = {
      {"angle_S4_over_j", "⟨S_4/j⟩", angle({4}, {}),
       {t(4, 9, w3), t(155, 54, pz4), t(-2, 3, w8), t(8, 3, w9)}},
      {"angle_S2S2_over_j", "⟨S_2^2/j⟩", angle({2, 2}, {}),
       {t(4, 9, w3), t(233, 81, pz4), t(-2, 3, w8), t(8, 3, w9)}},
      {"angle_S1S3_over_j", "⟨S_1 S_3/j⟩", angle({1, 3}, {}),
       {t(-9, 8, "D_1"), t(107, 54, w3), t(2437, 432, pz4), t(16, 9, w5), t(2, 9, w8), t(-14, 9, w9),
        t(-1, 3, w10)}},
      {"angle_S1S1S2_over_j", "⟨S_1^2 S_2/j⟩", angle({1, 1, 2}, {}),
       {t(5, 12, "D_1"), t(-131, 81, w3), t(-1843, 216, pz4), t(-98, 81, w5), t(1, 27, w6), t(14, 27, w8),
        t(-68, 27, w9), t(-2, 9, w10)}},
      {"angle_S1S1S1S1_over_j", "⟨S_1^4/j⟩", angle({1, 1, 1, 1}, {}),
       {t(16, "C_5"), t(23, 2, "D_1"), t(-218, 9, w3), t(2837, 108, pz4), t(716, 27, w5), t(110, 9, w6),
        t(1, 3, w7), t(-2, 3, w8), t(16, 3, w9), t(4, 3, w10)}},
      {"angle_S1S1S1L1_over_j", "⟨S_1^3 Λ_1/j⟩", angle({1, 1, 1}, {1}),
       {t(19, "C_5"), t(195, 16, "D_1"), t(-2717, 108, w3), t(40093, 864, pz4), t(302, 9, w5), t(89, 6, w6),
        t(1, 3, w7), t(-13, 9, w8), t(94, 9, w9), t(5, 3, w10)}},
      {"angle_S1S2L1_over_j", "⟨S_1 S_2 Λ_1/j⟩", angle({1, 2}, {1}),
       {t(83, 48, "D_1"), t(-1493, 324, w3), t(-50435, 2592, pz4), t(-278, 81, w5), t(1, 27, w6),
        t(17, 27, w8), t(-74, 27, w9), t(1, 9, w10)}},
      // printed with mismatched delimiters; read as a ⟨·⟩ row
      {"angle_S3L1_over_j", "⟨S_3 Λ_1/j⟩", angle({3}, {1}),
       {t(-9, 8, "D_1"), t(89, 54, w3), t(1855, 432, pz4), t(16, 9, w5), t(11, 9, w8), t(-62, 9, w9),
        t(-1, 3, w10)}},
      {"angle_S1S1L2_over_j", "⟨S_1^2 Λ_2/j⟩", angle({1, 1}, {2}),
       {t(22, "C_5"), t(257, 24, "D_1"), t(-3593, 162, w3), t(102433, 1296, pz4), t(3470, 81, w5),
        t(482, 27, w6), t(1, 3, w7), t(-56, 27, w8), t(404, 27, w9), t(14, 9, w10)}},
      {"angle_S2L2_over_j", "⟨S_2 Λ_2/j⟩", angle({2}, {2}),
       {t(73, 24, "D_1"), t(-1249, 162, w3), t(-42319, 1296, pz4), t(-458, 81, w5), t(1, 27, w6),
        t(-16, 27, w8), t(136, 27, w9), t(4, 9, w10)}},
      {"angle_S1L3_over_j", "⟨S_1 Λ_3/j⟩", angle({1}, {3}),
       {t(25, "C_5"), t(61, 8, "D_1"), t(-949, 54, w3), t(16771, 144, pz4), t(1402, 27, w5), t(383, 18, w6),
        t(1, 3, w7), t(-16, 9, w8), t(124, 9, w9), t(4, 3, w10)}},
      {"angle_L4_over_j", "⟨Λ_4/j⟩", angle({}, {4}),
       {t(28, "C_5"), t(7, 2, "D_1"), t(-422, 27, w3), t(5093, 36, pz4), t(1576, 27, w5), t(226, 9, w6),
        t(1, 3, w7), t(-16, 9, w8), t(136, 9, w9), t(4, 3, w10)}},

      {"bracket_S1_over_j4", "[S_1/j^4]", bracket({1}, {}, 4), {t(-28, 81, s1), t(19, 27, z23), t(134, 27, z5)}},
      {"bracket_L1_over_j4", "[Λ_1/j^4]", bracket({}, {1}, 4), {t(-82, 81, s1), t(46, 27, z23), t(847, 54, z5)}},
      {"bracket_S3_over_j2", "[S_3/j^2]", bracket({3}, {}, 2), {t(-4, 9, s1), t(8, 9, z23), t(58, 9, z5)}},
      {"bracket_S2_over_j3", "[S_2/j^3]", bracket({2}, {}, 3),
       {t(-4, 27, s1), t(2, 27, s3), t(2, 3, z23), t(29, 27, z5)}},
      {"bracket_S1S2_over_j2", "[S_1 S_2/j^2]", bracket({1, 2}, {}, 2),
       {t(20, 243, s1), t(-4, 81, s3), t(-23, 81, z23), t(-53, 81, z5)}},
      {"bracket_S2L1_over_j2", "[S_2 Λ_1/j^2]", bracket({2}, {1}, 2),
       {t(146, 243, s1), t(-7, 81, s3), t(-95, 81, z23), t(-662, 81, z5)}},
      {"bracket_S1S1_over_j3", "[S_1^2/j^3]", bracket({1, 1}, {}, 3),
       {t(2, 9, s1), t(-1, 2, x5), t(-13, 18, z23), t(-47, 18, z5)}},
      {"bracket_S1L1_over_j3", "[S_1 Λ_1/j^3]", bracket({1}, {1}, 3),
       {t(277, 324, s1), t(-1, 2, s2), t(23, 108, s3), t(323, 432, z23), t(-1291, 144, z5), t(-11, 16, x5)}},
      {"bracket_S1S1L1_over_j2", "[S_1^2 Λ_1/j^2]", bracket({1, 1}, {1}, 2),
       {t(-116, 243, s1), t(2, 3, s2), t(-23, 81, s3), t(-437, 162, z23), t(529, 162, z5), t(3, 2, x5)}},
      {"bracket_L2_over_j3", "[Λ_2/j^3]", bracket({}, {2}, 3),
       {t(337, 162, s1), t(-1, s2), t(67, 54, s3), t(335, 216, z23), t(-6037, 216, z5), t(-7, 8, x5)}},
      {"bracket_L3_over_j2", "[Λ_3/j^2]", bracket({}, {3}, 2),
       {t(-1015, 324, s1), t(7, 2, s2), t(-469, 108, s3), t(-5633, 432, z23), t(19123, 432, z5), t(49, 16, x5)}},
      {"bracket_S1L2_over_j2", "[S_1 Λ_2/j^2]", bracket({1}, {2}, 2),
       {t(-517, 324, s1), t(11, 6, s2), t(-143, 108, s3), t(-3059, 432, z23), t(7049, 432, z5), t(35, 16, x5)}},
  };
  for (const Identity& id : table) check_identity(id);
  return table;
}

}  // namespace

const std::vector<Identity>& builtin_table() {
  static const std::vector<Identity> table = make_table();
  return table;
}

const Identity& find_identity(std::string_view id) {
  for (const Identity& row : builtin_table()) {
    if (row.id == id) return row;
  }
  std::string msg = "unknown identity '" + std::string(id) + "'";
  std::string near;
  for (const Identity& row : builtin_table()) {
    if (row.id.find(id) != std::string::npos || std::string(id).find(row.id.substr(0, row.id.find("_over"))) == 0) {
      near += " " + row.id;
    }
  }
  if (!near.empty()) msg += "; did you mean:" + near;
  throw LookupError(msg);
}

std::string table_hash(const std::vector<Identity>& table) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const Identity& row : table) {
    mix(row.id);
    mix(format_sum_spec(row.lhs));
    for (const RhsTerm& term : row.rhs) mix(term.coeff.get_str() + "*" + term.constant);
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

void check_identity(const Identity& identity, const ConstantRegistry& registry) {
  identity.lhs.validate();
  for (const RhsTerm& term : identity.rhs) {
    if (!registry.contains(term.constant)) {
      throw ConfigurationError("identity " + identity.id + " refers to unregistered constant " + term.constant);
    }
    if (registry.get(term.constant).weight != identity.lhs.weight()) {
      throw ConfigurationError("identity " + identity.id + ": weight of " + term.constant + " differs from the sum");
    }
  }
}

VerificationReport verify_identity(const Identity& identity, int digits, ConstantEvaluator& evaluator) {
  if (digits < 20) throw DomainError("verify_identity: digits must be >= 20");
  check_identity(identity, evaluator.registry());
  const auto start = std::chrono::steady_clock::now();

  const int wd = working_digits(digits);
  const mpfr_prec_t bits = bits_for_digits(wd);
  const int J = truncation_index(identity.lhs, wd);
  Real lhs = binomial_partial_sum(identity.lhs, J, bits);

  Real rhs(bits);
  for (const RhsTerm& term : identity.rhs) rhs += Real(term.coeff, bits) * evaluator.value(term.constant, wd);

  Real residual = abs(lhs - rhs);
  const bool pass = residual < ten_to_minus(digits - 10, bits);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {identity.id, BigReal(std::move(lhs), digits), BigReal(std::move(rhs), digits), std::move(residual),
          digits, J, pass, seconds};
}

VerificationSummary verify_all(int digits, int jobs, const std::vector<Identity>& table,
                               ConstantEvaluator& evaluator) {
  if (digits < 20) throw DomainError("verify_all: digits must be >= 20");
  if (jobs < 1) throw DomainError("verify_all: jobs must be >= 1");
  for (const Identity& row : table) check_identity(row, evaluator.registry());

  std::vector<std::optional<VerificationReport>> slots(table.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < table.size();) {
      try {
        slots[i] = verify_identity(table[i], digits, evaluator);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const size_t n_threads = std::min<size_t>(static_cast<size_t>(jobs), std::max<size_t>(1, table.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  VerificationSummary summary;
  summary.digits = digits;
  summary.max_residual = Real(bits_for_digits(working_digits(digits)));
  for (auto& slot : slots) {
    VerificationReport& r = *slot;
    (r.pass ? summary.pass_count : summary.fail_count)++;
    if (r.residual > summary.max_residual) summary.max_residual = r.residual;
    summary.reports.push_back(std::move(r));
  }
  return summary;
}

bool glob_match(std::string_view pattern, std::string_view text) {
  size_t p = 0, s = 0, star = std::string_view::npos, mark = 0;
  while (s < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[s])) {
      ++p;
      ++s;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = s;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      s = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::vector<Identity> filter_table(const std::vector<Identity>& table, std::string_view pattern) {
  std::vector<Identity> out;
  for (const Identity& row : table) {
    if (glob_match(pattern, row.id)) out.push_back(row);
  }
  return out;
}

}  // namespace invbinom
