#include "tfnp/logic.hpp"

#include "tfnp/bits.hpp"
#include "tfnp/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tfnp::logic {

namespace {

std::vector<std::string> split_decls(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::pair<std::string, std::size_t> parse_decl(const std::string& d) {
  auto slash = d.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == d.size())
    throw InputError("symbol declaration must look like name/arity: '" + d + "'");
  std::size_t arity = 0;
  for (char c : d.substr(slash + 1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("bad arity in '" + d + "'");
    arity = arity * 10 + static_cast<std::size_t>(c - '0');
  }
  return {d.substr(0, slash), arity};
}

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

Signature Signature::parse(std::string_view functions, std::string_view relations) {
  Signature sig;
  for (const auto& d : split_decls(functions)) {
    auto [name, arity] = parse_decl(d);
    sig.add_function(name, arity);
  }
  for (const auto& d : split_decls(relations)) {
    auto [name, arity] = parse_decl(d);
    sig.add_relation(name, arity);
  }
  return sig;
}

bool Signature::declared(std::string_view name) const {
  auto same = [&](const Symbol& s) { return s.name == name; };
  return std::any_of(functions_.begin(), functions_.end(), same) ||
         std::any_of(relations_.begin(), relations_.end(), same);
}

void Signature::add_function(std::string name, std::size_t arity) {
  if (declared(name)) throw InputError("symbol '" + name + "' declared twice");
  functions_.push_back({std::move(name), arity});
}

void Signature::add_relation(std::string name, std::size_t arity) {
  if (arity == 0) throw InputError("relation '" + name + "' must have arity >= 1");
  if (name == "false" || name == "forall") throw InputError("'" + name + "' is reserved");
  if (declared(name)) throw InputError("symbol '" + name + "' declared twice");
  relations_.push_back({std::move(name), arity});
}

std::optional<std::size_t> Signature::function_arity(std::string_view name) const {
  for (const auto& s : functions_)
    if (s.name == name) return s.arity;
  return std::nullopt;
}

std::optional<std::size_t> Signature::relation_arity(std::string_view name) const {
  for (const auto& s : relations_)
    if (s.name == name) return s.arity;
  return std::nullopt;
}

void Signature::validate() const {
  if (std::none_of(functions_.begin(), functions_.end(), [](const Symbol& s) { return s.arity == 0; }))
    throw InputError("signature needs at least one constant");
}

bool Term::ground() const {
  if (is_variable) return false;
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.ground(); });
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const auto& a : args) d = std::max(d, a.depth() + 1);
  return d;
}

std::size_t Term::size() const {
  std::size_t s = 1;
  for (const auto& a : args) s += a.size();
  return s;
}

std::string Term::to_string() const {
  if (args.empty()) return head;
  std::string s = head + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += args[i].to_string();
  }
  return s + ")";
}

Formula Formula::atom(std::string relation, std::vector<Term> args) {
  Formula f;
  f.kind = Kind::Atom;
  f.relation = std::move(relation);
  f.args = std::move(args);
  return f;
}

Formula Formula::negation(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(g));
  return f;
}

namespace {
Formula binary(Formula::Kind k, Formula a, Formula b) {
  Formula f;
  f.kind = k;
  f.children.push_back(std::move(a));
  f.children.push_back(std::move(b));
  return f;
}

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

void print_formula(const Formula& f, std::string& out);

void print_child(const Formula& c, int min_prec, std::string& out) {
  bool wrap = precedence(c.kind) < min_prec;
  if (wrap) out += "(";
  print_formula(c, out);
  if (wrap) out += ")";
}

void print_formula(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom:
      out += f.relation + "(";
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ",";
        out += f.args[i].to_string();
      }
      out += ")";
      return;
    case K::False:
      out += "false";
      return;
    case K::Not:
      out += "~";
      print_child(f.children[0], 4, out);
      return;
    case K::And:
      print_child(f.children[0], 3, out);
      out += " & ";
      print_child(f.children[1], 4, out);
      return;
    case K::Or:
      print_child(f.children[0], 2, out);
      out += " | ";
      print_child(f.children[1], 3, out);
      return;
    case K::Implies:
      print_child(f.children[0], 2, out);
      out += " -> ";
      print_child(f.children[1], 1, out);
      return;
  }
}
}  // namespace

Formula Formula::conjunction(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
Formula Formula::disjunction(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
Formula Formula::implication(Formula a, Formula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }

std::string Formula::to_string() const {
  std::string out;
  print_formula(*this, out);
  return out;
}

bool Formula::ground() const {
  if (kind == Kind::Atom) return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.ground(); });
  return std::all_of(children.begin(), children.end(), [](const Formula& c) { return c.ground(); });
}

void Formula::collect_atoms(std::vector<const Formula*>& out) const {
  if (kind == Kind::Atom) {
    out.push_back(this);
    return;
  }
  for (const auto& c : children) c.collect_atoms(out);
}

std::size_t Formula::size() const {
  std::size_t s = 1;
  for (const auto& a : args) s += a.size();
  for (const auto& c : children) s += c.size();
  return s;
}

std::string UniversalSentence::to_string() const {
  std::string s = "forall ";
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (i) s += ",";
    s += variables[i];
  }
  return s + ". " + matrix.to_string();
}

namespace {

class SentenceParser {
 public:
  SentenceParser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  UniversalSentence parse_sentence() {
    UniversalSentence s;
    s.signature = sig_;
    if (ident() != "forall") throw ParseError("expected 'forall'", last_);
    do {
      auto v = ident();
      if (v.empty()) throw ParseError("expected a variable name", last_);
      if (sig_.function_arity(v) || sig_.relation_arity(v))
        throw ParseError("variable '" + v + "' clashes with a declared symbol", last_);
      if (std::find(s.variables.begin(), s.variables.end(), v) != s.variables.end())
        throw ParseError("variable '" + v + "' listed twice", last_);
      s.variables.push_back(v);
    } while (accept(","));
    if (!accept(".")) throw ParseError("expected '.' after the variable list", pos_);
    vars_ = s.variables;
    s.matrix = parse_implication();
    expect_end();
    return s;
  }

  Term parse_ground() {
    auto t = parse_term();
    expect_end();
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect_end() {
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  bool peek(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }
  std::string ident() {
    skip_ws();
    last_ = pos_;
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula parse_implication() {
    auto lhs = parse_or();
    if (accept("->")) return Formula::implication(std::move(lhs), parse_implication());
    return lhs;
  }
  Formula parse_or() {
    auto f = parse_and();
    while (!peek("->") && accept("|")) f = Formula::disjunction(std::move(f), parse_and());
    return f;
  }
  Formula parse_and() {
    auto f = parse_unary();
    while (accept("&")) f = Formula::conjunction(std::move(f), parse_unary());
    return f;
  }
  Formula parse_unary() {
    if (accept("~")) return Formula::negation(parse_unary());
    if (accept("(")) {
      auto f = parse_implication();
      if (!accept(")")) throw ParseError("expected ')'", pos_);
      return f;
    }
    auto name = ident();
    if (name.empty()) throw ParseError("expected a formula", pos_);
    if (name == "false") return Formula::falsum();
    auto arity = sig_.relation_arity(name);
    if (!arity) throw ParseError("undeclared relation symbol '" + name + "'", last_);
    std::size_t at = last_;
    auto args = parse_args();
    if (args.size() != *arity)
      throw ParseError("arity mismatch: relation '" + name + "' expects " + std::to_string(*arity) + " arguments, got " +
                           std::to_string(args.size()),
                       at);
    return Formula::atom(name, std::move(args));
  }
  std::vector<Term> parse_args() {
    std::vector<Term> args;
    if (!accept("(")) return args;
    do args.push_back(parse_term());
    while (accept(","));
    if (!accept(")")) throw ParseError("expected ')'", pos_);
    return args;
  }
  Term parse_term() {
    auto name = ident();
    if (name.empty()) throw ParseError("expected a term", pos_);
    std::size_t at = last_;
    if (std::find(vars_.begin(), vars_.end(), name) != vars_.end()) {
      if (peek("(")) throw ParseError("variable '" + name + "' applied to arguments", at);
      return Term::var(name);
    }
    auto arity = sig_.function_arity(name);
    if (!arity) throw ParseError("undeclared function symbol '" + name + "'", at);
    auto args = parse_args();
    if (args.size() != *arity)
      throw ParseError("arity mismatch: function '" + name + "' expects " + std::to_string(*arity) + " arguments, got " +
                           std::to_string(args.size()),
                       at);
    return Term::app(name, std::move(args));
  }

  std::string_view text_;
  const Signature& sig_;
  std::vector<std::string> vars_;
  std::size_t pos_ = 0;
  std::size_t last_ = 0;
};

void check_ground_term(const Term& t, const Signature& sig) {
  if (t.is_variable) throw InputError("term '" + t.to_string() + "' is not ground");
  auto arity = sig.function_arity(t.head);
  if (!arity) throw InputError("undeclared function symbol '" + t.head + "'");
  if (*arity != t.args.size()) throw InputError("arity mismatch in term '" + t.to_string() + "'");
  for (const auto& a : t.args) check_ground_term(a, sig);
}

Term substitute_term(const Term& t, const std::vector<std::string>& vars, const std::vector<Term>& tuple) {
  if (t.is_variable) {
    auto it = std::find(vars.begin(), vars.end(), t.head);
    if (it == vars.end()) throw InputError("free variable '" + t.head + "' not bound by the quantifier prefix");
    return tuple[static_cast<std::size_t>(it - vars.begin())];
  }
  Term out = Term::app(t.head);
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(substitute_term(a, vars, tuple));
  return out;
}

Formula substitute_formula(const Formula& f, const std::vector<std::string>& vars, const std::vector<Term>& tuple) {
  Formula out;
  out.kind = f.kind;
  out.relation = f.relation;
  for (const auto& a : f.args) out.args.push_back(substitute_term(a, vars, tuple));
  for (const auto& c : f.children) out.children.push_back(substitute_formula(c, vars, tuple));
  return out;
}

prop::PropFormula to_prop(const Formula& f, const std::map<std::string, std::size_t>& index) {
  using K = Formula::Kind;
  using prop::PropFormula;
  switch (f.kind) {
    case K::Atom:
      return PropFormula::variable(static_cast<std::uint32_t>(index.at(f.to_string()) + 1));
    case K::False:
      return PropFormula::constant(false);
    case K::Not:
      return PropFormula::negation(to_prop(f.children[0], index));
    case K::And:
      return PropFormula::conjunction({to_prop(f.children[0], index), to_prop(f.children[1], index)});
    case K::Or:
      return PropFormula::disjunction({to_prop(f.children[0], index), to_prop(f.children[1], index)});
    case K::Implies:
      return PropFormula::disjunction(
          {PropFormula::negation(to_prop(f.children[0], index)), to_prop(f.children[1], index)});
  }
  return PropFormula::constant(false);
}

}  // namespace

UniversalSentence parse_sentence(std::string_view text, const Signature& signature) {
  return SentenceParser(text, signature).parse_sentence();
}

Term parse_ground_term(std::string_view text, const Signature& signature) {
  return SentenceParser(text, signature).parse_ground();
}

UniversalSentence parse_sentence_file(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, functions, relations, body;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (line.rfind("functions:", 0) == 0) functions += " " + line.substr(10);
    else if (line.rfind("relations:", 0) == 0) relations += " " + line.substr(10);
    else body += line + "\n";
  }
  auto sig = Signature::parse(functions, relations);
  sig.validate();
  return parse_sentence(body, sig);
}

std::string print_sentence_file(const UniversalSentence& s) {
  std::string out = "functions:";
  for (const auto& f : s.signature.functions()) out += " " + f.name + "/" + std::to_string(f.arity);
  out += "\nrelations:";
  for (const auto& r : s.signature.relations()) out += " " + r.name + "/" + std::to_string(r.arity);
  return out + "\n" + s.to_string() + "\n";
}

Formula substitute(const UniversalSentence& sentence, const std::vector<Term>& tuple) {
  if (tuple.size() != sentence.variables.size())
    throw InputError("tuple has " + std::to_string(tuple.size()) + " terms, sentence binds " +
                     std::to_string(sentence.variables.size()) + " variables");
  for (const auto& t : tuple) check_ground_term(t, sentence.signature);
  return substitute_formula(sentence.matrix, sentence.variables, tuple);
}

GroundConjunction herbrand_expand(const UniversalSentence& sentence, const std::vector<std::vector<Term>>& tuples) {
  GroundConjunction g;
  for (const auto& tuple : tuples) {
    g.instances.push_back(substitute(sentence, tuple));
    std::vector<const Formula*> atoms;
    g.instances.back().collect_atoms(atoms);
    for (const auto* a : atoms) {
      auto key = a->to_string();
      if (g.atom_index.emplace(key, g.atoms.size()).second) g.atoms.push_back(*a);
    }
  }
  std::vector<prop::PropFormula> parts;
  for (const auto& inst : g.instances) parts.push_back(to_prop(inst, g.atom_index));
  g.propositional = prop::PropFormula::conjunction(std::move(parts));
  return g;
}

bool GroundConjunction::evaluate(const std::vector<bool>& assignment) const {
  if (assignment.size() != atoms.size())
    throw InputError("assignment covers " + std::to_string(assignment.size()) + " atoms, expected " +
                     std::to_string(atoms.size()));
  return prop::evaluate(propositional, prop::Assignment::from_bits(assignment));
}

std::vector<Term> enumerate_herbrand_terms(const Signature& signature, std::size_t depth) {
  signature.validate();
  std::vector<Term> all;
  for (const auto& f : signature.functions())
    if (f.arity == 0) all.push_back(Term::app(f.name));
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<Term> next;
    for (const auto& f : signature.functions()) {
      if (f.arity == 0) continue;
      std::vector<std::size_t> idx(f.arity, 0);
      while (true) {
        Term t = Term::app(f.name);
        std::size_t max_depth = 0;
        for (auto i : idx) {
          t.args.push_back(all[i]);
          max_depth = std::max(max_depth, all[i].depth());
        }
        if (max_depth + 1 == d) next.push_back(std::move(t));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == all.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    all.insert(all.end(), std::make_move_iterator(next.begin()), std::make_move_iterator(next.end()));
  }
  std::vector<std::pair<std::pair<std::size_t, std::string>, Term>> keyed;
  for (auto& t : all) keyed.push_back({{t.depth(), t.to_string()}, std::move(t)});
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Term> out;
  for (auto& [k, t] : keyed) out.push_back(std::move(t));
  return out;
}

Term binary_numeral(std::uint64_t n) {
  Term zero = Term::app("0");
  if (n == 0) return zero;
  Term one = Term::app("S", {zero});
  Term two = Term::app("S", {one});
  std::size_t k = bit_length(n);
  Term t = one;  // leading bit a_1 is always 1
  for (std::size_t i = 1; i < k; ++i) {
    bool bit = (n >> (k - 1 - i)) & 1u;
    t = Term::app("+", {Term::app("*", {std::move(t), two}), bit ? one : zero});
  }
  return t;
}

std::uint64_t evaluate_arithmetic(const Term& t) {
  if (t.head == "0" && t.args.empty()) return 0;
  if (t.head == "S" && t.args.size() == 1) return evaluate_arithmetic(t.args[0]) + 1;
  if (t.head == "+" && t.args.size() == 2) return evaluate_arithmetic(t.args[0]) + evaluate_arithmetic(t.args[1]);
  if (t.head == "*" && t.args.size() == 2) return evaluate_arithmetic(t.args[0]) * evaluate_arithmetic(t.args[1]);
  throw InputError("not an arithmetic term: " + t.to_string());
}

Formula pad_sentence(const Formula& phi, std::size_t m) {
  if (m == 0) throw InputError("padding needs at least one conjunct");
  Formula filler = Formula::falsum();
  for (std::size_t i = 1; i < m; ++i) filler = Formula::conjunction(std::move(filler), Formula::falsum());
  return Formula::disjunction(phi, std::move(filler));
}

bool evaluate_ground(const Formula& f, const std::map<std::string, bool>& atoms) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom: {
      auto it = atoms.find(f.to_string());
      if (it == atoms.end()) throw InputError("no value for atom " + f.to_string());
      return it->second;
    }
    case K::False:
      return false;
    case K::Not:
      return !evaluate_ground(f.children[0], atoms);
    case K::And:
      return evaluate_ground(f.children[0], atoms) && evaluate_ground(f.children[1], atoms);
    case K::Or:
      return evaluate_ground(f.children[0], atoms) || evaluate_ground(f.children[1], atoms);
    case K::Implies:
      return !evaluate_ground(f.children[0], atoms) || evaluate_ground(f.children[1], atoms);
  }
  return false;
}

nlohmann::json to_json(const Term& t) {
  nlohmann::json j{{"head", t.head}};
  if (!t.args.empty()) {
    j["args"] = nlohmann::json::array();
    for (const auto& a : t.args) j["args"].push_back(to_json(a));
  }
  return j;
}

nlohmann::json to_json(const Formula& f) {
  using K = Formula::Kind;
  nlohmann::json j;
  j["args"] = nlohmann::json::array();
  switch (f.kind) {
    case K::Atom:
      j["head"] = f.relation;
      for (const auto& a : f.args) j["args"].push_back(to_json(a));
      return j;
    case K::False: j["head"] = "false"; break;
    case K::Not: j["head"] = "~"; break;
    case K::And: j["head"] = "&"; break;
    case K::Or: j["head"] = "|"; break;
    case K::Implies: j["head"] = "->"; break;
  }
  for (const auto& c : f.children) j["args"].push_back(to_json(c));
  return j;
}

nlohmann::json to_json(const UniversalSentence& s) {
  nlohmann::json sig{{"functions", nlohmann::json::array()}, {"relations", nlohmann::json::array()}};
  for (const auto& f : s.signature.functions()) sig["functions"].push_back({f.name, f.arity});
  for (const auto& r : s.signature.relations()) sig["relations"].push_back({r.name, r.arity});
  return {{"signature", sig}, {"vars", s.variables}, {"matrix", to_json(s.matrix)}};
}

namespace {

Term term_from_json_in(const nlohmann::json& j, const std::vector<std::string>& vars) {
  if (!j.is_object() || !j.contains("head") || !j["head"].is_string()) throw InputError("term JSON needs a string 'head'");
  auto head = j["head"].get<std::string>();
  std::vector<Term> args;
  if (j.contains("args"))
    for (const auto& a : j["args"]) args.push_back(term_from_json_in(a, vars));
  if (args.empty() && std::find(vars.begin(), vars.end(), head) != vars.end()) return Term::var(head);
  return Term::app(head, std::move(args));
}

Formula formula_from_json_in(const nlohmann::json& j, const std::vector<std::string>& vars) {
  if (!j.is_object() || !j.contains("head") || !j["head"].is_string())
    throw InputError("formula JSON needs a string 'head'");
  auto head = j["head"].get<std::string>();
  auto args = j.value("args", nlohmann::json::array());
  auto sub = [&](std::size_t i) {
    if (i >= args.size()) throw InputError("formula JSON node '" + head + "' is missing arguments");
    return formula_from_json_in(args[i], vars);
  };
  auto arity = [&](std::size_t n) {
    if (args.size() != n) throw InputError("formula JSON node '" + head + "' has the wrong number of arguments");
  };
  if (head == "false") return arity(0), Formula::falsum();
  if (head == "~") return arity(1), Formula::negation(sub(0));
  if (head == "&") return arity(2), Formula::conjunction(sub(0), sub(1));
  if (head == "|") return arity(2), Formula::disjunction(sub(0), sub(1));
  if (head == "->") return arity(2), Formula::implication(sub(0), sub(1));
  std::vector<Term> terms;
  for (const auto& a : args) terms.push_back(term_from_json_in(a, vars));
  return Formula::atom(head, std::move(terms));
}

}  // namespace

Term term_from_json(const nlohmann::json& j) { return term_from_json_in(j, {}); }
Formula formula_from_json(const nlohmann::json& j) { return formula_from_json_in(j, {}); }

UniversalSentence sentence_from_json(const nlohmann::json& j) {
  try {
    UniversalSentence s;
    for (const auto& f : j.at("signature").at("functions")) s.signature.add_function(f.at(0), f.at(1));
    for (const auto& r : j.at("signature").at("relations")) s.signature.add_relation(r.at(0), r.at(1));
    s.signature.validate();
    s.variables = j.at("vars").get<std::vector<std::string>>();
    s.matrix = formula_from_json_in(j.at("matrix"), s.variables);
    // Re-parse the printed form to run the same arity and scope checks.
    return parse_sentence(s.to_string(), s.signature);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad sentence JSON: ") + e.what());
  }
}

}  // namespace tfnp::logic
