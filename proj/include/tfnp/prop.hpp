#pragma once

// Propositional formulas, CNF, Tseitin encoding, a DPLL solver and DIMACS.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tfnp::prop {

/// Formula tree over variables x1, x2, ... with n-ary AND/OR.
struct PropFormula {
  enum class Kind { Var, Const, Not, And, Or };
  Kind kind = Kind::Const;
  std::uint32_t var = 0;  // Var: index >= 1
  bool value = false;     // Const
  std::vector<PropFormula> children;

  static PropFormula variable(std::uint32_t v);
  static PropFormula constant(bool b);
  static PropFormula negation(PropFormula f);
  static PropFormula conjunction(std::vector<PropFormula> fs);
  static PropFormula disjunction(std::vector<PropFormula> fs);

  std::uint32_t max_var() const;
  std::size_t size() const;
  auto operator<=>(const PropFormula&) const = default;
};

/// Text syntax: x<n>, T, F, ~, &, |, parentheses. `&` binds tighter than `|`.
PropFormula parse_formula(std::string_view text);
std::string print_formula(const PropFormula& f);

/// Total map from variables 1..n to bits.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t num_vars) : values_(num_vars, 0) {}
  static Assignment from_bits(const std::vector<bool>& bits);

  std::size_t num_vars() const { return values_.size(); }
  bool operator[](std::uint32_t var) const { return values_.at(var - 1) != 0; }
  void set(std::uint32_t var, bool b) { values_.at(var - 1) = b ? 1 : 0; }
  /// Restriction to variables 1..n.
  Assignment restrict(std::size_t n) const;
  std::vector<bool> bits() const;
  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;

 private:
  std::vector<std::uint8_t> values_;
};

/// Throws InputError when the formula mentions a variable outside the domain.
bool evaluate(const PropFormula& f, const Assignment& a);

struct Cnf {
  std::size_t num_vars = 0;
  std::vector<std::vector<int>> clauses;

  /// Throws InputError on out-of-range literals or complementary pairs.
  void validate() const;
  bool satisfied_by(const Assignment& a) const;
  bool operator==(const Cnf&) const = default;
};

struct TseitinResult {
  Cnf cnf;
  /// Original variables keep their indices; auxiliaries start after this.
  std::uint32_t original_vars = 0;
};

TseitinResult tseitin(const PropFormula& f);

struct SatResult {
  bool satisfiable = false;
  Assignment model;
  std::uint64_t decisions = 0;
};

/// DPLL with two watched literals and first-unassigned branching.
SatResult sat_solve(const Cnf& cnf);

/// Every model restricted to variables 1..project, deduplicated and sorted.
/// Throws ResourceLimit when more than `limit` distinct projections exist.
std::vector<Assignment> sat_enumerate(const Cnf& cnf, std::size_t project, std::size_t limit);

std::string to_dimacs(const Cnf& cnf);
/// Parses DIMACS. Duplicate literals inside a clause are collapsed and
/// tautological clauses are dropped; `c` comment lines are ignored.
Cnf from_dimacs(std::string_view text);

/// Brute-force satisfiability over all assignments; for test oracles and
/// small instances only (throws ResourceLimit above 24 variables).
std::optional<Assignment> brute_force_sat(const PropFormula& f, std::size_t num_vars);

/// The CNF as a formula: conjunction of disjunctions of literals.
PropFormula cnf_to_formula(const Cnf& cnf);

}  // namespace tfnp::prop
