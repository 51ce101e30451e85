#pragma once

// First-order syntax without equality: terms, quantifier-free matrices,
// universal sentences, ground instantiation and Herbrand expansion.

#include "tfnp/prop.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tfnp::logic {

struct Symbol {
  std::string name;
  std::size_t arity = 0;
  bool operator==(const Symbol&) const = default;
};

class Signature {
 public:
  Signature() = default;
  /// Parses "c/0 f/1" style declarations for functions and relations.
  static Signature parse(std::string_view functions, std::string_view relations);

  void add_function(std::string name, std::size_t arity);
  void add_relation(std::string name, std::size_t arity);

  std::optional<std::size_t> function_arity(std::string_view name) const;
  std::optional<std::size_t> relation_arity(std::string_view name) const;
  const std::vector<Symbol>& functions() const { return functions_; }
  const std::vector<Symbol>& relations() const { return relations_; }

  /// Throws InputError unless there is at least one constant.
  void validate() const;
  bool operator==(const Signature&) const = default;

 private:
  bool declared(std::string_view name) const;
  std::vector<Symbol> functions_;
  std::vector<Symbol> relations_;
};

struct Term {
  std::string head;
  std::vector<Term> args;
  bool is_variable = false;

  static Term var(std::string name) { return Term{std::move(name), {}, true}; }
  static Term app(std::string head, std::vector<Term> args = {}) { return Term{std::move(head), std::move(args), false}; }

  bool ground() const;
  std::size_t depth() const;
  std::size_t size() const;
  std::string to_string() const;
  auto operator<=>(const Term&) const = default;
};

/// Quantifier-free formula. `False` is the always-false filler used by
/// padding; the term language has no equality.
struct Formula {
  enum class Kind { Atom, False, Not, And, Or, Implies };
  Kind kind = Kind::False;
  std::string relation;        // Atom only
  std::vector<Term> args;      // Atom only
  std::vector<Formula> children;

  static Formula atom(std::string relation, std::vector<Term> args);
  static Formula falsum() { return Formula{}; }
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);

  std::string to_string() const;
  bool ground() const;
  /// Atoms in first-occurrence order (duplicates kept).
  void collect_atoms(std::vector<const Formula*>& out) const;
  std::size_t size() const;
  auto operator<=>(const Formula&) const = default;
};

struct UniversalSentence {
  Signature signature;
  std::vector<std::string> variables;
  Formula matrix;

  std::string to_string() const;
  bool operator==(const UniversalSentence&) const = default;
};

/// Conjunction of ground instances with its atom table. Atom i of the
/// table is propositional variable i+1.
struct GroundConjunction {
  std::vector<Formula> instances;
  std::vector<Formula> atoms;
  std::map<std::string, std::size_t> atom_index;  // printed atom -> index
  /// The conjunction over variables 1..atoms.size().
  prop::PropFormula propositional;

  /// Evaluates the conjunction; assignment bit i is the value of atom i.
  /// Throws InputError when the assignment has the wrong length.
  bool evaluate(const std::vector<bool>& assignment) const;
};

/// Parses a sentence against a declared signature. Names listed after
/// `forall` are variables; every other name must be declared.
UniversalSentence parse_sentence(std::string_view text, const Signature& signature);
/// Parses the sentence file format:
///   functions: c/0 f/1
///   relations: R/2
///   forall x,y. <matrix>
UniversalSentence parse_sentence_file(std::string_view text);
std::string print_sentence_file(const UniversalSentence& s);
/// Parses a ground term over the signature.
Term parse_ground_term(std::string_view text, const Signature& signature);

Formula substitute(const UniversalSentence& sentence, const std::vector<Term>& tuple);
GroundConjunction herbrand_expand(const UniversalSentence& sentence, const std::vector<std::vector<Term>>& tuples);

/// All ground terms of depth <= depth, ordered by depth then printed form.
std::vector<Term> enumerate_herbrand_terms(const Signature& signature, std::size_t depth);

/// Horner-form numeral over 0, S, +, * with the leading bit first.
Term binary_numeral(std::uint64_t n);
/// Standard semantics of 0, S, +, *. Throws InputError on other symbols.
std::uint64_t evaluate_arithmetic(const Term& t);

/// φ ∨ (⊥ ∧ ... ∧ ⊥) with m conjuncts; m must be positive.
Formula pad_sentence(const Formula& phi, std::size_t m);

/// Truth value of a ground formula given atom values keyed by printed atom.
bool evaluate_ground(const Formula& f, const std::map<std::string, bool>& atoms);

nlohmann::json to_json(const Term& t);
nlohmann::json to_json(const Formula& f);
nlohmann::json to_json(const UniversalSentence& s);
Term term_from_json(const nlohmann::json& j);
Formula formula_from_json(const nlohmann::json& j);
UniversalSentence sentence_from_json(const nlohmann::json& j);

}  // namespace tfnp::logic
