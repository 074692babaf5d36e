// Command-line front end: evaluate constants and sums, verify the reduction
// table, rediscover coefficients with PSLQ, benchmark, and list the registry.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invbinom/constants.hpp"
#include "invbinom/errors.hpp"
#include "invbinom/integer_relation.hpp"
#include "invbinom/nested_sums.hpp"
#include "invbinom/verifier.hpp"

using namespace invbinom;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrecision = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int digits = 50;
  int jobs = 1;
  std::string cache_path;
  std::string format = "text";
  std::string filter = "*";
  bool compact_cache = false;
};

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string residual_text(const Real& r) { return r.is_zero() ? "0" : r.to_scientific(3); }

std::string seconds_text(double s) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << s;
  return out.str();
}

struct Context {
  RunConfig config;
  std::unique_ptr<ConstantCache> cache;
  std::unique_ptr<ConstantEvaluator> evaluator;

  explicit Context(RunConfig c) : config(std::move(c)) {
    if (config.digits < 10) throw UsageError("--digits must be >= 10");
    if (config.jobs < 1) throw UsageError("--jobs must be >= 1");
    std::string path = config.cache_path;
    if (path.empty()) {
      if (const char* env = std::getenv("INVBINOM_CACHE"); env && *env) path = env;
    }
    if (!path.empty()) cache = std::make_unique<ConstantCache>(path);
    evaluator = std::make_unique<ConstantEvaluator>(ConstantRegistry::builtin(), cache.get());
  }
  ~Context() {
    if (cache && config.compact_cache) cache->rewrite();
  }
  bool json() const { return config.format == "json"; }
};

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_eval_constant(Context& ctx, const std::string& name) {
  const ConstantRegistry& registry = ConstantRegistry::builtin();
  const BasisConstant& c = registry.get(name);
  const BigReal v = ctx.evaluator->constant(c.name, ctx.config.digits);
  if (ctx.json()) {
    emit({{"command", "eval-constant"},
          {"name", c.name},
          {"notation", c.notation},
          {"weight", c.weight},
          {"digits", ctx.config.digits},
          {"value", v.value.to_decimal(ctx.config.digits)},
          {"recipe_hash", registry.recipe_hash(c.name)}});
  } else {
    std::cout << v.value.to_decimal(ctx.config.digits) << '\n';
  }
  return kExitOk;
}

int cmd_eval_sum(Context& ctx, const std::string& text) {
  SumSpec spec;
  try {
    spec = parse_sum_spec(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const BinomialSumResult r = binomial_sum_detailed(spec, ctx.config.digits);
  if (ctx.json()) {
    emit({{"command", "eval-sum"},
          {"spec", format_sum_spec(spec)},
          {"weight", spec.weight()},
          {"digits", ctx.config.digits},
          {"value", r.value.value.to_decimal(ctx.config.digits)},
          {"truncation_index", r.truncation_index}});
  } else {
    std::cout << r.value.value.to_decimal(ctx.config.digits) << '\n';
    std::cerr << "# " << format_sum_spec(spec) << ": truncated at J = " << r.truncation_index << '\n';
  }
  return kExitOk;
}

int cmd_verify(Context& ctx) {
  const int digits = ctx.config.digits;
  if (digits < 20) throw UsageError("verify: --digits must be >= 20");
  const std::vector<Identity> table = filter_table(builtin_table(), ctx.config.filter);
  Timer timer;
  const VerificationSummary summary = verify_all(digits, ctx.config.jobs, table, *ctx.evaluator);
  const auto generating = c_generating_check(5, digits, *ctx.evaluator);
  const Real tol = ten_to_minus(digits - 10, bits_for_digits(digits));
  bool generating_ok = true;
  for (const auto& e : generating) generating_ok = generating_ok && e.residual < tol;
  const bool ok = summary.fail_count == 0 && generating_ok;
  const double wall = timer.seconds();

  if (ctx.json()) {
    Json rows = Json::array();
    for (size_t i = 0; i < summary.reports.size(); ++i) {
      const VerificationReport& r = summary.reports[i];
      rows.push_back({{"id", r.id},
                      {"display", table[i].display},
                      {"lhs_spec", format_sum_spec(table[i].lhs)},
                      {"lhs_value", r.lhs.value.to_decimal(digits)},
                      {"rhs_value", r.rhs.value.to_decimal(digits)},
                      {"residual", residual_text(r.residual)},
                      {"pass", r.pass},
                      {"truncation_index", r.truncation_index},
                      {"wall_seconds", r.seconds}});
    }
    Json gen = Json::array();
    for (const auto& e : generating) {
      gen.push_back({{"label", e.label},
                     {"registry_value", e.registry_value.to_decimal(digits)},
                     {"expansion_value", e.expansion_value.to_decimal(digits)},
                     {"residual", residual_text(e.residual)},
                     {"pass", e.residual < tol}});
    }
    emit({{"command", "verify"},
          {"digits", digits},
          {"filter", ctx.config.filter},
          {"table_hash", table_hash(table)},
          {"pass_count", summary.pass_count},
          {"fail_count", summary.fail_count},
          {"max_residual", residual_text(summary.max_residual)},
          {"identities", rows},
          {"generating_check", gen},
          {"all_pass", ok},
          {"wall_seconds", wall}});
  } else {
    std::cout << std::left << std::setw(26) << "identity" << std::setw(12) << "residual" << std::setw(6) << "J"
              << "result\n";
    for (const VerificationReport& r : summary.reports) {
      std::cout << std::setw(26) << r.id << std::setw(12) << residual_text(r.residual) << std::setw(6)
                << r.truncation_index << (r.pass ? "PASS" : "FAIL") << '\n';
    }
    std::cout << "\ngenerating function check (tolerance 1e-" << digits - 10 << ")\n";
    for (const auto& e : generating) {
      std::cout << std::setw(26) << e.label << std::setw(12) << residual_text(e.residual) << std::setw(6) << ""
                << (e.residual < tol ? "PASS" : "FAIL") << '\n';
    }
    std::cout << "\n"
              << summary.pass_count << "/" << summary.reports.size() << " identities pass at " << digits
              << " digits, max residual " << residual_text(summary.max_residual) << "; generating check "
              << (generating_ok ? "PASS" : "FAIL") << "; " << seconds_text(wall) << " s\n";
  }
  return ok ? kExitOk : kExitFailure;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<Real> read_values(const std::string& path, int digits) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read values file " + path);
  std::vector<Real> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    try {
      values.push_back(Real::parse(line.substr(b, e - b + 1), bits_for_digits(digits)));
    } catch (const std::invalid_argument& err) {
      throw UsageError(path + ": " + err.what());
    }
  }
  return values;
}

Json relation_json(const RelationResult& r) {
  Json j = {{"found", r.relation.has_value()},
            {"iterations", r.iterations},
            {"stop_reason", r.stop_reason},
            {"norm_bound", residual_text(r.norm_bound)}};
  if (r.relation) {
    Json coeffs = Json::array();
    for (const mpz_class& c : r.relation->coeffs) coeffs.push_back(c.get_str());
    j["integer_relation"] = coeffs;
    j["residual"] = residual_text(r.relation->residual);
  }
  return j;
}

int cmd_discover(Context& ctx, const std::string& target, const std::string& basis_text,
                 const std::string& values_path, int max_coeff_bits) {
  const int digits = ctx.config.digits;
  if (target.empty() == values_path.empty()) throw UsageError("discover: give exactly one of IDENTITY or --values FILE");

  auto resolve_bits = [&](size_t n) {
    if (max_coeff_bits > 0) return max_coeff_bits;
    const int supported = supported_coeff_bits(n, digits);
    if (supported < 1) {
      throw PrecisionError("discover: " + std::to_string(digits) + " digits cannot support any coefficient bound for " +
                               std::to_string(n) + " values",
                           required_digits(n, 1));
    }
    return std::min(40, supported);
  };

  if (!values_path.empty()) {
    RelationProblem problem{read_values(values_path, digits), 0, digits};
    if (problem.values.size() < 2) throw UsageError("discover: values file needs at least two numbers");
    problem.max_coeff_bits = resolve_bits(problem.values.size());
    const RelationResult r = find_relation(problem);
    if (ctx.json()) {
      Json j = {{"command", "discover"}, {"values_file", values_path}, {"digits", digits},
                {"max_coeff_bits", problem.max_coeff_bits}};
      j.update(relation_json(r));
      emit(j);
    } else if (r.relation) {
      std::cout << "relation:";
      for (const mpz_class& c : r.relation->coeffs) std::cout << ' ' << c.get_str();
      std::cout << "\nresidual: " << residual_text(r.relation->residual) << '\n';
    } else {
      std::cout << "no relation with coefficients up to 2^" << problem.max_coeff_bits << " (" << r.stop_reason
                << "); norm bound " << residual_text(r.norm_bound) << '\n';
    }
    return r.relation ? kExitOk : kExitFailure;
  }

  const Identity& row = find_identity(target);
  const ConstantRegistry& registry = ctx.evaluator->registry();
  std::vector<std::string> basis;
  if (basis_text.empty()) {
    for (const RhsTerm& t : row.rhs) basis.push_back(t.constant);
  } else {
    for (const std::string& name : split_list(basis_text)) basis.push_back(registry.get(name).name);
  }
  const int bits = resolve_bits(basis.size() + 1);
  const Rediscovery found = rediscover(row.lhs, basis, digits, bits, *ctx.evaluator);

  std::map<std::string, mpq_class> printed;
  for (const RhsTerm& t : row.rhs) printed[t.constant] = t.coeff;
  bool match = found.coefficients.has_value();
  if (match) {
    size_t covered = 0;
    for (size_t i = 0; i < basis.size(); ++i) {
      auto it = printed.find(basis[i]);
      const mpq_class expected = it == printed.end() ? mpq_class(0) : it->second;
      if (it != printed.end()) ++covered;
      if ((*found.coefficients)[i] != expected) match = false;
    }
    if (covered != printed.size()) match = false;
  }
  const std::string verdict = !found.coefficients ? "NO RELATION" : (match ? "MATCH" : "MISMATCH");

  if (ctx.json()) {
    Json coeffs = Json::array();
    if (found.coefficients) {
      for (const mpq_class& q : *found.coefficients) coeffs.push_back(q.get_str());
    }
    Json j = {{"command", "discover"},
              {"identity", row.id},
              {"display", row.display},
              {"lhs_spec", format_sum_spec(row.lhs)},
              {"basis", basis},
              {"digits", digits},
              {"max_coeff_bits", bits},
              {"coefficients", found.coefficients ? coeffs : Json(nullptr)},
              {"verdict", verdict}};
    j.update(relation_json(found.search));
    emit(j);
  } else {
    std::cout << row.display << " over {";
    for (size_t i = 0; i < basis.size(); ++i) std::cout << (i ? ", " : "") << basis[i];
    std::cout << "} at " << digits << " digits, coefficients up to 2^" << bits << '\n';
    if (found.coefficients) {
      for (size_t i = 0; i < basis.size(); ++i) {
        std::cout << "  " << std::left << std::setw(16) << basis[i] << (*found.coefficients)[i].get_str() << '\n';
      }
    } else {
      std::cout << "  no relation (" << found.search.stop_reason << "); norm bound "
                << residual_text(found.search.norm_bound) << '\n';
    }
    std::cout << verdict << '\n';
  }
  return verdict == "MATCH" ? kExitOk : kExitFailure;
}

int cmd_bench(Context& ctx) {
  const int digits = std::max(ctx.config.digits, 20);
  std::vector<std::pair<std::string, double>> timings;
  ConstantEvaluator fresh;  // no memo, no file cache
  {
    Timer t;
    for (const BasisConstant& c : fresh.registry().constants()) {
      if (c.is_primitive()) fresh.value(c.name, working_digits(digits));
    }
    timings.emplace_back("primitive constants", t.seconds());
  }
  {
    Timer t;
    for (const Identity& row : builtin_table()) binomial_sum(row.lhs, digits);
    timings.emplace_back("24 binomial sums", t.seconds());
  }
  {
    Timer t;
    verify_all(digits, ctx.config.jobs, builtin_table(), fresh);
    timings.emplace_back("verify_all (jobs=" + std::to_string(ctx.config.jobs) + ")", t.seconds());
  }
  {
    Timer t;
    const Identity& row = find_identity("angle_S1S1S1S1_over_j");
    std::vector<std::string> basis;
    for (const RhsTerm& term : row.rhs) basis.push_back(term.constant);
    const int d = std::max(digits, 120);
    rediscover(row.lhs, basis, d, std::min(40, supported_coeff_bits(basis.size() + 1, d)), fresh);
    timings.emplace_back("PSLQ rediscovery, 11 values at " + std::to_string(d) + " digits", t.seconds());
  }
  if (ctx.json()) {
    Json rows = Json::array();
    for (const auto& [task, s] : timings) rows.push_back({{"task", task}, {"seconds", s}});
    emit({{"command", "bench"}, {"digits", digits}, {"timings", rows}});
  } else {
    for (const auto& [task, s] : timings) std::cout << std::left << std::setw(48) << task << seconds_text(s) << " s\n";
  }
  return kExitOk;
}

int cmd_list(Context& ctx, const std::string& what) {
  const ConstantRegistry& registry = ConstantRegistry::builtin();
  const bool constants = what == "all" || what == "constants";
  const bool identities = what == "all" || what == "identities";
  const bool basis = what == "all" || what == "basis";
  if (!constants && !identities && !basis) throw UsageError("list: expected constants, identities, basis or all");

  if (ctx.json()) {
    Json j = {{"command", "list"}};
    if (constants) {
      Json rows = Json::array();
      for (const BasisConstant& c : registry.constants()) {
        rows.push_back({{"name", c.name},
                        {"notation", c.notation},
                        {"weight", c.weight},
                        {"recipe", c.recipe_text()},
                        {"recipe_hash", registry.recipe_hash(c.name)}});
      }
      j["constants"] = rows;
      j["aliases"] = registry.aliases();
    }
    if (identities) {
      Json rows = Json::array();
      for (const Identity& row : builtin_table()) {
        Json rhs = Json::array();
        for (const RhsTerm& t : row.rhs) rhs.push_back({{"coeff", t.coeff.get_str()}, {"constant", t.constant}});
        rows.push_back({{"id", row.id}, {"display", row.display}, {"lhs_spec", format_sum_spec(row.lhs)}, {"rhs", rhs}});
      }
      j["identities"] = rows;
      j["table_hash"] = table_hash();
    }
    if (basis) {
      Json rows = Json::array();
      for (int w = 1; w <= 5; ++w) {
        const BasisSet set = registry.list_basis(w);
        Json omega = Json::array(), sigma = Json::array();
        for (const auto* c : set.omega) omega.push_back(c->name);
        for (const auto* c : set.sigma) sigma.push_back(c->name);
        rows.push_back({{"weight", w}, {"omega", omega}, {"sigma", sigma}});
      }
      j["basis"] = rows;
    }
    emit(j);
    return kExitOk;
  }
  if (constants) {
    std::cout << "constants:\n";
    for (const BasisConstant& c : registry.constants()) {
      std::cout << "  " << std::left << std::setw(18) << c.name << "w" << c.weight << "  " << c.recipe_text() << '\n';
    }
  }
  if (identities) {
    std::cout << "identities:\n";
    for (const Identity& row : builtin_table()) {
      std::cout << "  " << std::left << std::setw(26) << row.id << format_sum_spec(row.lhs) << '\n';
    }
  }
  if (basis) {
    std::cout << "basis:\n";
    for (int w = 1; w <= 5; ++w) {
      const BasisSet set = registry.list_basis(w);
      std::cout << "  weight " << w << "  omega:";
      for (const auto* c : set.omega) std::cout << ' ' << c->name;
      std::cout << "\n            sigma:";
      for (const auto* c : set.sigma) std::cout << ' ' << c->name;
      std::cout << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invbinom: multiple inverse binomial sums, log-sine constants and weight-5 reductions"};
  app.require_subcommand(1);
  RunConfig config;
  config.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--digits", config.digits, "accurate decimal digits (>= 10; verify needs >= 20)")->capture_default_str();
  app.add_option("--jobs", config.jobs, "worker threads for verify")->capture_default_str();
  app.add_option("--cache", config.cache_path, "constant cache file (default: $INVBINOM_CACHE)");
  app.add_option("--format", config.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--filter", config.filter, "glob over identity ids for verify")->capture_default_str();
  app.add_flag("--compact-cache", config.compact_cache, "rewrite the cache file sorted, dropping stale records");
  app.fallthrough();

  std::string name, spec, target, basis, values, what = "all";
  int max_coeff_bits = 0;
  auto* eval_constant = app.add_subcommand("eval-constant", "print a registered constant");
  eval_constant->add_option("name", name, "canonical name or alias")->required();
  auto* eval_sum = app.add_subcommand("eval-sum", "evaluate a sum given as `[sqrt3] S<a>... L<b>... / j^<c>`");
  eval_sum->add_option("spec", spec, "sum spec string")->required();
  auto* verify = app.add_subcommand("verify", "verify the reduction table and the generating-function check");
  auto* discover = app.add_subcommand("discover", "recover rational coefficients with PSLQ");
  discover->add_option("identity", target, "identity id (see `list identities`)");
  discover->add_option("--basis", basis, "comma-separated basis constants (default: the identity's own)");
  discover->add_option("--values", values, "file of decimal values, one per line");
  discover->add_option("--max-coeff-bits", max_coeff_bits, "coefficient bound (default: min(40, supported))");
  auto* bench = app.add_subcommand("bench", "time the main kernels");
  auto* list = app.add_subcommand("list", "list constants, identities and basis sets");
  list->add_option("what", what, "constants | identities | basis | all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Context ctx(config);
    if (*eval_constant) return cmd_eval_constant(ctx, name);
    if (*eval_sum) return cmd_eval_sum(ctx, spec);
    if (*verify) return cmd_verify(ctx);
    if (*discover) return cmd_discover(ctx, target, basis, values, max_coeff_bits);
    if (*bench) return cmd_bench(ctx);
    if (*list) return cmd_list(ctx, what);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PrecisionError& e) {
    std::cerr << "error: " << e.what() << " (required digits: " << e.required_digits() << ")\n";
    return kExitPrecision;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
