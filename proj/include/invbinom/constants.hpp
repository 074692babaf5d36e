#pragma once

// Registry of the named weight 1..5 constants: primitives evaluated by the
// special-function and binomial-sum kernels, and composites that are
// rational combinations of products of other registered constants.

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "invbinom/real.hpp"

namespace invbinom {

/// coeff · Π factors
struct Monomial {
  mpq_class coeff;
  std::vector<std::string> factors;
};

struct BasisConstant {
  std::string name;      // canonical ASCII name, e.g. "omega_8_5"
  int weight = 0;
  std::string notation;  // conventional notation, e.g. "ω_8^(5)"
  /// Empty for primitives; otherwise the defining combination.
  std::vector<Monomial> recipe;
  /// Readable description of a primitive's evaluation path.
  std::string primitive_recipe;

  bool is_primitive() const { return recipe.empty(); }
  /// Canonical text of this constant's own recipe.
  std::string recipe_text() const;
};

struct BasisSet {
  std::vector<const BasisConstant*> omega;
  std::vector<const BasisConstant*> sigma;
};

class ConstantRegistry {
 public:
  /// The shipped registry. Immutable after construction.
  static const ConstantRegistry& builtin();

  /// Throws LookupError (with near matches in the message) for unknown names.
  const BasisConstant& get(std::string_view name) const;
  bool contains(std::string_view name) const;
  /// Canonical name for a canonical name or alias ("ω_8^(5)", "πζ_4", ...).
  std::optional<std::string> resolve(std::string_view name_or_alias) const;
  std::vector<std::string> near_matches(std::string_view name, size_t limit = 5) const;

  const std::vector<BasisConstant>& constants() const { return constants_; }
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

  /// 16 hex digits, FNV-1a over the recipe closure (the constant's recipe and
  /// every recipe it depends on).
  std::string recipe_hash(std::string_view name) const;

  /// ω and σ members of the given weight (1..5).
  BasisSet list_basis(int weight) const;

 private:
  ConstantRegistry();
  void add_primitive(std::string name, int weight, std::string notation, std::string recipe);
  void add_composite(std::string name, std::string notation, std::vector<Monomial> recipe);
  void alias(std::string alias, std::string name);

  std::vector<BasisConstant> constants_;
  std::map<std::string, size_t, std::less<>> index_;
  std::map<std::string, std::string> aliases_;
};

BasisSet list_basis(int weight);

/// Persistent cache: one record per line, tab separated
///   name  digits  recipe-hash  decimal
/// appended as values are computed; rewrite() sorts by (name, digits).
class ConstantCache {
 public:
  explicit ConstantCache(std::filesystem::path path);

  std::optional<std::string> lookup(std::string_view name, int digits, std::string_view hash) const;
  void store(const std::string& name, int digits, const std::string& hash, const std::string& decimal);
  /// Drops stale and duplicate records and writes the file in sorted order.
  void rewrite() const;
  const std::filesystem::path& path() const { return path_; }
  size_t size() const;

 private:
  struct Record {
    std::string hash;
    std::string decimal;
  };
  void load();

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, int>, Record> records_;
};

/// Evaluates registered constants with an in-memory memo and an optional
/// file cache. Thread-safe.
class ConstantEvaluator {
 public:
  explicit ConstantEvaluator(const ConstantRegistry& registry = ConstantRegistry::builtin(),
                             ConstantCache* cache = nullptr);

  /// Accepts canonical names and aliases. digits >= 10.
  BigReal constant(std::string_view name, int digits);
  /// Raw value at `wdigits` working digits (no rounding to a requested accuracy).
  Real value(std::string_view name, int wdigits);

  const ConstantRegistry& registry() const { return registry_; }

 private:
  Real evaluate_primitive(const BasisConstant& c, int wdigits);

  const ConstantRegistry& registry_;
  ConstantCache* cache_;
  std::mutex mutex_;
  std::map<std::pair<std::string, int>, std::string> memo_;  // (name, wdigits) -> decimal
};

/// Process-wide evaluator without a file cache.
ConstantEvaluator& default_evaluator();

/// Convenience wrapper around default_evaluator().
BigReal constant(std::string_view name, int digits);

struct GeneratingCheckEntry {
  std::string label;  // e.g. "C_3"
  Real registry_value;
  Real expansion_value;
  Real residual;
};

/// Compares C_1..C_order (C_1 = 0, C_2 = 2 Ls_2(π/3), C_3..C_5 from the
/// registry) with the ε-expansion of (3/2) 3^(-ε) Σ_j (2ε)^j/j! Ls_(j+1)(2π/3),
/// whose j = 0 term is dropped. order in 1..5.
std::vector<GeneratingCheckEntry> c_generating_check(int order, int digits,
                                                     ConstantEvaluator& evaluator = default_evaluator());

}  // namespace invbinom
