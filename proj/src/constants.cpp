#include "invbinom/constants.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "invbinom/errors.hpp"
#include "invbinom/nested_sums.hpp"
#include "invbinom/special_functions.hpp"

namespace invbinom {

namespace {

Monomial term(long coeff, std::vector<std::string> factors) { return {mpq_class(coeff), std::move(factors)}; }
Monomial q(long num, long den, std::vector<std::string> factors) {
  mpq_class c(num, den);
  c.canonicalize();
  return {c, std::move(factors)};
}

size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr const char* kLs2 = "Ls_2(pi/3)";
constexpr const char* kLs3b = "Ls_3(2pi/3)";
constexpr const char* kLs4a = "Ls_4(pi/3)";
constexpr const char* kLs4b = "Ls_4(2pi/3)";
constexpr const char* kLs5a = "Ls_5(pi/3)";
constexpr const char* kLs5b = "Ls_5(2pi/3)";
constexpr const char* kLs52b = "Ls_5^(2)(2pi/3)";
constexpr const char* kLs41b = "Ls_4^(1)(2pi/3)";

}  // namespace

std::string BasisConstant::recipe_text() const {
  if (is_primitive()) return name + " := " + primitive_recipe;
  std::string out = name + " :=";
  for (const Monomial& m : recipe) {
    out += " + " + m.coeff.get_str();
    for (const std::string& f : m.factors) out += " * " + f;
  }
  return out;
}

ConstantRegistry::ConstantRegistry() {
  add_primitive("pi", 1, "π", "mpfr const pi");
  add_primitive("ln2", 1, "ln 2", "mpfr const log2");
  add_primitive("ln3", 1, "ln 3", "mpfr log(3)");
  add_primitive("zeta_2", 2, "ζ_2", "zeta(2): Bernoulli closed form");
  add_primitive("zeta_3", 3, "ζ_3", "zeta(3): Borwein alternating series");
  add_primitive("zeta_4", 4, "ζ_4", "zeta(4): Bernoulli closed form");
  add_primitive("zeta_5", 5, "ζ_5", "zeta(5): Borwein alternating series");
  add_primitive(kLs2, 2, "Ls_2(π/3)", "log_sine(2, 0, pi/3)");
  add_primitive(kLs3b, 3, "Ls_3(2π/3)", "log_sine(3, 0, 2pi/3)");
  add_primitive(kLs4a, 4, "Ls_4(π/3)", "log_sine(4, 0, pi/3)");
  add_primitive(kLs4b, 4, "Ls_4(2π/3)", "log_sine(4, 0, 2pi/3)");
  add_primitive(kLs5a, 5, "Ls_5(π/3)", "log_sine(5, 0, pi/3)");
  add_primitive(kLs5b, 5, "Ls_5(2π/3)", "log_sine(5, 0, 2pi/3)");
  add_primitive(kLs52b, 5, "Ls_5^(2)(2π/3)", "log_sine(5, 2, 2pi/3)");
  add_primitive(kLs41b, 4, "Ls_4^(1)(2π/3)", "log_sine(4, 1, 2pi/3)");
  add_primitive("chi_5", 5, "χ_5", "binomial_sum(S1 S1 S1 / j^2)");

  add_composite("zeta_2_zeta_3", "ζ_2 ζ_3", {term(1, {"zeta_2", "zeta_3"})});

  add_composite("C_3", "C_3", {term(3, {kLs3b}), term(-2, {kLs2, "ln3"})});
  add_composite("C_4", "C_4", {term(2, {kLs4b}), term(-3, {kLs3b, "ln3"}), term(1, {kLs2, "ln3", "ln3"})});
  add_composite("C_5", "C_5",
                {term(1, {kLs5b}), term(-2, {kLs4b, "ln3"}), q(3, 2, {kLs3b, "ln3", "ln3"}),
                 q(-1, 3, {kLs2, "ln3", "ln3", "ln3"})});
  add_composite("D_1", "D_1",
                {term(3, {kLs52b}), term(-4, {"pi", kLs41b}), q(32, 27, {kLs4a, "ln3"}), term(8, {"zeta_2", kLs3b})});

  // ω set (√3-prefactored sums)
  add_composite("omega_1_1", "ω^(1)", {term(1, {"pi"})});
  add_composite("omega_1_2", "ω_1^(2)", {term(1, {kLs2})});
  add_composite("omega_2_2", "ω_2^(2)", {term(1, {"pi", "ln3"})});
  add_composite("omega_1_3", "ω_1^(3)", {term(1, {"C_3"})});
  add_composite("omega_2_3", "ω_2^(3)", {term(1, {"pi", "ln3", "ln3"})});
  add_composite("omega_3_3", "ω_3^(3)", {term(1, {"pi", "zeta_2"})});
  add_composite("omega_1_4", "ω_1^(4)", {term(1, {"C_4"})});
  add_composite("omega_2_4", "ω_2^(4)", {term(1, {kLs4a})});
  add_composite("omega_3_4", "ω_3^(4)", {term(1, {"pi", "zeta_3"})});
  add_composite("omega_4_4", "ω_4^(4)", {term(1, {"pi", "ln3", "ln3", "ln3"})});
  add_composite("omega_5_4", "ω_5^(4)", {term(1, {"zeta_2", kLs2})});
  add_composite("omega_6_4", "ω_6^(4)", {term(1, {"zeta_2", "pi", "ln3"})});
  add_composite("omega_1_5", "ω_1^(5)", {term(1, {"C_5"})});
  add_composite("omega_2_5", "ω_2^(5)", {term(1, {"D_1"})});
  add_composite("omega_3_5", "ω_3^(5)", {term(1, {kLs5a})});
  add_composite("omega_4_5", "ω_4^(5)", {term(1, {"pi", "zeta_4"})});
  add_composite("omega_5_5", "ω_5^(5)", {term(1, {"pi", "zeta_3", "ln3"})});
  add_composite("omega_6_5", "ω_6^(5)", {term(1, {"pi", "zeta_2", "ln3", "ln3"})});
  add_composite("omega_7_5", "ω_7^(5)", {term(1, {"pi", "ln3", "ln3", "ln3", "ln3"})});
  add_composite("omega_8_5", "ω_8^(5)", {term(1, {"pi", kLs2, kLs2})});
  add_composite("omega_9_5", "ω_9^(5)", {term(1, {"zeta_3", kLs2})});
  add_composite("omega_10_5", "ω_10^(5)", {term(1, {"zeta_2", "C_3"})});

  // σ set (plain sums)
  add_composite("sigma_1_2", "σ^(2)", {term(1, {"zeta_2"})});
  add_composite("sigma_1_3", "σ_1^(3)", {term(1, {"zeta_3"})});
  add_composite("sigma_2_3", "σ_2^(3)", {term(1, {"pi", kLs2})});
  add_composite("sigma_1_4", "σ_1^(4)", {term(1, {"pi", kLs3b})});
  add_composite("sigma_2_4", "σ_2^(4)", {term(1, {kLs2, kLs2})});
  add_composite("sigma_3_4", "σ_3^(4)", {term(1, {"zeta_4"})});
  add_composite("sigma_1_5", "σ_1^(5)", {term(1, {"pi", kLs4a})});
  add_composite("sigma_2_5", "σ_2^(5)", {term(1, {"pi", kLs4b})});
  add_composite("sigma_3_5", "σ_3^(5)", {term(1, {"pi", "zeta_2", kLs2})});
  add_composite("sigma_4_5", "σ_4^(5)", {term(1, {"chi_5"})});
  add_composite("sigma_5_5", "σ_5^(5)", {term(1, {"zeta_5"})});
  add_composite("sigma_6_5", "σ_6^(5)", {term(1, {"zeta_2", "zeta_3"})});

  alias("π", "pi");
  alias("ln 2", "ln2");
  alias("ln 3", "ln3");
  alias("χ_5", "chi_5");
  alias("πζ_4", "omega_4_5");
  alias("pi_zeta_4", "omega_4_5");
  alias("ζ_2ζ_3", "zeta_2_zeta_3");
  for (int k = 2; k <= 5; ++k) alias("ζ_" + std::to_string(k), "zeta_" + std::to_string(k));
  for (const BasisConstant& c : std::vector<BasisConstant>(constants_)) {
    if (c.notation != c.name && !aliases_.contains(c.notation)) alias(c.notation, c.name);
  }
  // Unicode spellings of the log-sine names
  alias("Ls_2(π/3)", kLs2);
  alias("Ls_3(2π/3)", kLs3b);
  alias("Ls_4(π/3)", kLs4a);
  alias("Ls_4(2π/3)", kLs4b);
  alias("Ls_5(π/3)", kLs5a);
  alias("Ls_5(2π/3)", kLs5b);
  alias("Ls_5^(2)(2π/3)", kLs52b);
  alias("Ls_4^(1)(2π/3)", kLs41b);

  // weight bookkeeping: every monomial of a composite has the declared weight
  for (BasisConstant& c : constants_) {
    if (c.is_primitive()) continue;
    for (const Monomial& m : c.recipe) {
      int w = 0;
      for (const std::string& f : m.factors) w += get(f).weight;
      if (w != c.weight) throw ConfigurationError("weight mismatch in recipe of " + c.name);
    }
  }
}

void ConstantRegistry::add_primitive(std::string name, int weight, std::string notation, std::string recipe) {
  BasisConstant c;
  c.name = std::move(name);
  c.weight = weight;
  c.notation = std::move(notation);
  c.primitive_recipe = std::move(recipe);
  index_.emplace(c.name, constants_.size());
  constants_.push_back(std::move(c));
}

void ConstantRegistry::add_composite(std::string name, std::string notation, std::vector<Monomial> recipe) {
  BasisConstant c;
  c.name = std::move(name);
  c.notation = std::move(notation);
  for (const std::string& f : recipe.front().factors) c.weight += get(f).weight;
  c.recipe = std::move(recipe);
  index_.emplace(c.name, constants_.size());
  constants_.push_back(std::move(c));
}

void ConstantRegistry::alias(std::string alias, std::string name) {
  if (!index_.contains(name)) throw ConfigurationError("alias to unknown constant " + name);
  if (index_.contains(alias)) return;
  auto [it, inserted] = aliases_.emplace(std::move(alias), name);
  if (!inserted && it->second != name) throw ConfigurationError("ambiguous alias " + it->first);
}

const ConstantRegistry& ConstantRegistry::builtin() {
  static const ConstantRegistry registry;
  return registry;
}

std::optional<std::string> ConstantRegistry::resolve(std::string_view name_or_alias) const {
  if (index_.find(name_or_alias) != index_.end()) return std::string(name_or_alias);
  auto it = aliases_.find(std::string(name_or_alias));
  if (it != aliases_.end()) return it->second;
  return std::nullopt;
}

bool ConstantRegistry::contains(std::string_view name) const { return resolve(name).has_value(); }

const BasisConstant& ConstantRegistry::get(std::string_view name) const {
  auto canonical = resolve(name);
  if (!canonical) {
    std::string msg = "unknown constant '" + std::string(name) + "'";
    auto near = near_matches(name);
    if (!near.empty()) {
      msg += "; did you mean:";
      for (const auto& n : near) msg += " " + n;
    }
    throw LookupError(msg);
  }
  return constants_[index_.find(*canonical)->second];
}

std::vector<std::string> ConstantRegistry::near_matches(std::string_view name, size_t limit) const {
  std::vector<std::pair<size_t, std::string>> scored;
  for (const BasisConstant& c : constants_) {
    size_t d = edit_distance(name, c.name);
    if (!name.empty() && c.name.find(name) != std::string::npos) d = std::min<size_t>(d, 1);
    scored.emplace_back(d, c.name);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  const size_t cutoff = std::max<size_t>(3, name.size() / 2);
  for (const auto& [d, n] : scored) {
    if (out.size() >= limit || d > cutoff) break;
    out.push_back(n);
  }
  return out;
}

std::string ConstantRegistry::recipe_hash(std::string_view name) const {
  std::set<std::string> closure;
  std::function<void(const BasisConstant&)> visit = [&](const BasisConstant& c) {
    if (!closure.insert(c.name).second) return;
    for (const Monomial& m : c.recipe) {
      for (const std::string& f : m.factors) visit(get(f));
    }
  };
  visit(get(name));
  std::uint64_t h = fnv1a("invbinom-recipe-v1");
  for (const std::string& n : closure) h = fnv1a(get(n).recipe_text() + "\n", h);
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

BasisSet ConstantRegistry::list_basis(int weight) const {
  if (weight < 1 || weight > 5) throw DomainError("list_basis: weight must be in 1..5");
  BasisSet set;
  const std::string suffix = "_" + std::to_string(weight);
  for (const BasisConstant& c : constants_) {
    const bool omega = c.name.rfind("omega_", 0) == 0;
    const bool sigma = c.name.rfind("sigma_", 0) == 0;
    if (!(omega || sigma) || !c.name.ends_with(suffix)) continue;
    (omega ? set.omega : set.sigma).push_back(&c);
  }
  return set;
}

BasisSet list_basis(int weight) { return ConstantRegistry::builtin().list_basis(weight); }

ConstantCache::ConstantCache(std::filesystem::path path) : path_(std::move(path)) { load(); }

void ConstantCache::load() {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string name, digits, hash, decimal;
    if (!std::getline(fields, name, '\t') || !std::getline(fields, digits, '\t') ||
        !std::getline(fields, hash, '\t') || !std::getline(fields, decimal)) {
      continue;
    }
    try {
      records_[{name, std::stoi(digits)}] = {hash, decimal};  // later lines win
    } catch (const std::exception&) {
      continue;
    }
  }
}

std::optional<std::string> ConstantCache::lookup(std::string_view name, int digits, std::string_view hash) const {
  std::lock_guard lock(mutex_);
  auto it = records_.find({std::string(name), digits});
  if (it == records_.end() || it->second.hash != hash) return std::nullopt;
  return it->second.decimal;
}

void ConstantCache::store(const std::string& name, int digits, const std::string& hash, const std::string& decimal) {
  std::lock_guard lock(mutex_);
  records_[{name, digits}] = {hash, decimal};
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app);
  out << name << '\t' << digits << '\t' << hash << '\t' << decimal << '\n';
}

void ConstantCache::rewrite() const {
  std::lock_guard lock(mutex_);
  const ConstantRegistry& registry = ConstantRegistry::builtin();
  std::ofstream out(path_, std::ios::trunc);
  for (const auto& [key, rec] : records_) {
    if (!registry.contains(key.first) || registry.recipe_hash(key.first) != rec.hash) continue;
    out << key.first << '\t' << key.second << '\t' << rec.hash << '\t' << rec.decimal << '\n';
  }
}

size_t ConstantCache::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

ConstantEvaluator::ConstantEvaluator(const ConstantRegistry& registry, ConstantCache* cache)
    : registry_(registry), cache_(cache) {}

Real ConstantEvaluator::evaluate_primitive(const BasisConstant& c, int wdigits) {
  const mpfr_prec_t bits = bits_for_digits(wdigits);
  const std::string& n = c.name;
  if (n == "pi") return pi(bits);
  if (n == "ln2") return ln2(bits);
  if (n == "ln3") return log(Real(3L, bits));
  if (n.rfind("zeta_", 0) == 0) return zeta_value(std::stol(n.substr(5)), bits);
  if (n == "chi_5") {
    SumSpec spec{{1, 1, 1}, {}, 2, Prefactor::none};
    return binomial_partial_sum(spec, truncation_index(spec, wdigits), bits);
  }
  struct LsEntry {
    const char* name;
    int j, k, sixth;
  };
  static const LsEntry table[] = {{kLs2, 2, 0, 1},  {kLs3b, 3, 0, 2}, {kLs4a, 4, 0, 1},  {kLs4b, 4, 0, 2},
                                  {kLs5a, 5, 0, 1}, {kLs5b, 5, 0, 2}, {kLs52b, 5, 2, 2}, {kLs41b, 4, 1, 2}};
  for (const LsEntry& e : table) {
    if (n == e.name) return log_sine_value(e.j, e.k, Angle::sixth(e.sixth).value(bits), bits);
  }
  throw ConfigurationError("no evaluator for primitive " + n);
}

Real ConstantEvaluator::value(std::string_view name, int wdigits) {
  const BasisConstant& c = registry_.get(name);
  const std::pair<std::string, int> key{c.name, wdigits};
  const mpfr_prec_t bits = bits_for_digits(wdigits);
  {
    std::lock_guard lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return Real::parse(it->second, bits);
  }
  Real v(bits);
  if (c.is_primitive()) {
    v = evaluate_primitive(c, wdigits);
  } else {
    // factors carry magnitudes up to ~10^2; four extra digits cover the products
    for (const Monomial& m : c.recipe) {
      Real prod(m.coeff, bits_for_digits(wdigits + 4));
      for (const std::string& f : m.factors) prod *= value(f, wdigits + 4);
      v += prod;
    }
    v = Real(v, bits);
  }
  std::string decimal = v.to_decimal(wdigits);
  std::lock_guard lock(mutex_);
  memo_.emplace(key, decimal);
  return Real::parse(decimal, bits);
}

BigReal ConstantEvaluator::constant(std::string_view name, int digits) {
  if (digits < 10) throw DomainError("constant: digits must be >= 10");
  const BasisConstant& c = registry_.get(name);
  const int wd = working_digits(digits);
  const mpfr_prec_t bits = bits_for_digits(wd);
  const std::string hash = registry_.recipe_hash(c.name);
  if (cache_) {
    if (auto hit = cache_->lookup(c.name, digits, hash)) return {Real::parse(*hit, bits), digits};
  }
  Real v = value(c.name, wd);
  if (cache_) cache_->store(c.name, digits, hash, v.to_decimal(wd));
  return {std::move(v), digits};
}

ConstantEvaluator& default_evaluator() {
  static ConstantEvaluator evaluator;
  return evaluator;
}

BigReal constant(std::string_view name, int digits) { return default_evaluator().constant(name, digits); }

std::vector<GeneratingCheckEntry> c_generating_check(int order, int digits, ConstantEvaluator& evaluator) {
  if (order < 1 || order > 5) throw DomainError("c_generating_check: order must be in 1..5 (unsupported beyond Ls_5)");
  if (digits < 10) throw DomainError("c_generating_check: digits must be >= 10");
  const int wd = working_digits(digits);
  const mpfr_prec_t bits = bits_for_digits(wd + 4);
  const Real theta = Angle::sixth(2).value(bits);
  const Real minus_ln3 = -log(Real(3L, bits));

  // Ls_(n+1)(2π/3), n >= 1, computed directly rather than from the registry.
  std::vector<Real> ls(static_cast<size_t>(order), Real(bits));
  for (int n = 1; n < order; ++n) ls[static_cast<size_t>(n)] = log_sine_value(n + 1, 0, theta, bits);

  std::vector<GeneratingCheckEntry> out;
  for (int j = 0; j < order; ++j) {
    // (3/2) Σ_{n=1}^{j} 2^n/n! (-ln 3)^(j-n)/(j-n)! Ls_(n+1)(2π/3)
    Real coeff(bits);
    for (int n = 1; n <= j; ++n) {
      mpz_class fn, fm;
      mpz_fac_ui(fn.get_mpz_t(), static_cast<unsigned long>(n));
      mpz_fac_ui(fm.get_mpz_t(), static_cast<unsigned long>(j - n));
      Real t = ldexp(ls[static_cast<size_t>(n)], n) * pow(minus_ln3, static_cast<unsigned long>(j - n));
      t /= fn;
      t /= fm;
      coeff += t;
    }
    coeff = coeff * 3L / 2L;

    Real reg(bits);
    std::string label = "C_" + std::to_string(j + 1);
    if (j == 1) reg = evaluator.value(kLs2, wd + 4) * 2L;
    if (j >= 2) reg = evaluator.value(label, wd + 4);
    Real residual = abs(reg - coeff);
    out.push_back({label, std::move(reg), std::move(coeff), std::move(residual)});
  }
  return out;
}

}  // namespace invbinom
