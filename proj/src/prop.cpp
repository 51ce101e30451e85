#include "tfnp/prop.hpp"

#include "tfnp/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace tfnp::prop {

PropFormula PropFormula::variable(std::uint32_t v) {
  if (v == 0) throw InputError("propositional variables are numbered from 1");
  PropFormula f;
  f.kind = Kind::Var;
  f.var = v;
  return f;
}

PropFormula PropFormula::constant(bool b) {
  PropFormula f;
  f.kind = Kind::Const;
  f.value = b;
  return f;
}

PropFormula PropFormula::negation(PropFormula g) {
  PropFormula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(g));
  return f;
}

PropFormula PropFormula::conjunction(std::vector<PropFormula> fs) {
  if (fs.empty()) return constant(true);
  if (fs.size() == 1) return std::move(fs.front());
  PropFormula f;
  f.kind = Kind::And;
  f.children = std::move(fs);
  return f;
}

PropFormula PropFormula::disjunction(std::vector<PropFormula> fs) {
  if (fs.empty()) return constant(false);
  if (fs.size() == 1) return std::move(fs.front());
  PropFormula f;
  f.kind = Kind::Or;
  f.children = std::move(fs);
  return f;
}

std::uint32_t PropFormula::max_var() const {
  std::uint32_t m = kind == Kind::Var ? var : 0;
  for (const auto& c : children) m = std::max(m, c.max_var());
  return m;
}

std::size_t PropFormula::size() const {
  std::size_t s = 1;
  for (const auto& c : children) s += c.size();
  return s;
}

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  PropFormula parse() {
    auto f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PropFormula parse_or() {
    std::vector<PropFormula> parts{parse_and()};
    while (accept('|')) parts.push_back(parse_and());
    return PropFormula::disjunction(std::move(parts));
  }

  PropFormula parse_and() {
    std::vector<PropFormula> parts{parse_unary()};
    while (accept('&')) parts.push_back(parse_unary());
    return PropFormula::conjunction(std::move(parts));
  }

  PropFormula parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of formula", pos_);
    char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return PropFormula::negation(parse_unary());
    }
    if (c == '(') {
      ++pos_;
      auto f = parse_or();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return f;
    }
    if (c == 'T' || c == 'F') {
      ++pos_;
      return PropFormula::constant(c == 'T');
    }
    if (c == 'x') {
      ++pos_;
      std::size_t start = pos_;
      std::uint64_t v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
        if (v > 0xffffffffu) throw ParseError("variable index too large", start);
        ++pos_;
      }
      if (pos_ == start || v == 0) throw ParseError("expected a variable index >= 1", start);
      return PropFormula::variable(static_cast<std::uint32_t>(v));
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_into(const PropFormula& f, std::string& out) {
  using K = PropFormula::Kind;
  switch (f.kind) {
    case K::Var:
      out += "x" + std::to_string(f.var);
      return;
    case K::Const:
      out += f.value ? "T" : "F";
      return;
    case K::Not: {
      out += "~";
      const auto& c = f.children[0];
      bool wrap = c.kind == K::And || c.kind == K::Or;
      if (wrap) out += "(";
      print_into(c, out);
      if (wrap) out += ")";
      return;
    }
    case K::And:
    case K::Or: {
      const char* sep = f.kind == K::And ? " & " : " | ";
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += sep;
        const auto& c = f.children[i];
        bool wrap = c.kind == K::Or || c.kind == f.kind;
        if (wrap) out += "(";
        print_into(c, out);
        if (wrap) out += ")";
      }
      return;
    }
  }
}

}  // namespace

PropFormula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string print_formula(const PropFormula& f) {
  std::string out;
  print_into(f, out);
  return out;
}

Assignment Assignment::from_bits(const std::vector<bool>& bits) {
  Assignment a(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) a.values_[i] = bits[i];
  return a;
}

Assignment Assignment::restrict(std::size_t n) const {
  Assignment a(n);
  for (std::size_t i = 0; i < n && i < values_.size(); ++i) a.values_[i] = values_[i];
  return a;
}

std::vector<bool> Assignment::bits() const { return {values_.begin(), values_.end()}; }

bool evaluate(const PropFormula& f, const Assignment& a) {
  using K = PropFormula::Kind;
  switch (f.kind) {
    case K::Var:
      if (f.var > a.num_vars()) throw InputError("assignment does not cover x" + std::to_string(f.var));
      return a[f.var];
    case K::Const:
      return f.value;
    case K::Not:
      return !evaluate(f.children[0], a);
    case K::And:
      return std::all_of(f.children.begin(), f.children.end(), [&](const auto& c) { return evaluate(c, a); });
    case K::Or:
      return std::any_of(f.children.begin(), f.children.end(), [&](const auto& c) { return evaluate(c, a); });
  }
  return false;
}

void Cnf::validate() const {
  for (const auto& clause : clauses) {
    std::set<int> seen;
    for (int lit : clause) {
      if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > num_vars)
        throw InputError("literal " + std::to_string(lit) + " out of range");
      if (seen.count(-lit)) throw InputError("clause contains both a literal and its negation");
      seen.insert(lit);
    }
  }
}

bool Cnf::satisfied_by(const Assignment& a) const {
  for (const auto& clause : clauses) {
    bool sat = false;
    for (int lit : clause)
      if (a[static_cast<std::uint32_t>(std::abs(lit))] == (lit > 0)) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

namespace {

class TseitinEncoder {
 public:
  explicit TseitinEncoder(std::uint32_t originals) : next_(originals + 1) {}

  int encode(const PropFormula& f) {
    using K = PropFormula::Kind;
    switch (f.kind) {
      case K::Var:
        return static_cast<int>(f.var);
      case K::Const: {
        int t = fresh();
        clauses_.push_back({f.value ? t : -t});
        return t;
      }
      case K::Not:
        return -encode(f.children[0]);
      case K::And:
      case K::Or: {
        std::vector<int> lits;
        for (const auto& c : f.children) lits.push_back(encode(c));
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        bool complementary = std::any_of(lits.begin(), lits.end(),
                                         [&](int l) { return std::binary_search(lits.begin(), lits.end(), -l); });
        int g = fresh();
        bool is_and = f.kind == K::And;
        if (complementary) {
          clauses_.push_back({is_and ? -g : g});
          return g;
        }
        // AND: g -> l_i, and (l_1 & ... & l_k) -> g.  OR is the dual.
        std::vector<int> big{is_and ? g : -g};
        for (int l : lits) {
          clauses_.push_back({is_and ? -g : g, is_and ? l : -l});
          big.push_back(is_and ? -l : l);
        }
        clauses_.push_back(std::move(big));
        return g;
      }
    }
    return 0;
  }

  int fresh() { return static_cast<int>(next_++); }
  std::uint32_t next() const { return next_; }
  std::vector<std::vector<int>>& clauses() { return clauses_; }

 private:
  std::uint32_t next_;
  std::vector<std::vector<int>> clauses_;
};

}  // namespace

TseitinResult tseitin(const PropFormula& f) {
  TseitinResult r;
  r.original_vars = f.max_var();
  TseitinEncoder enc(r.original_vars);
  int root = enc.encode(f);
  enc.clauses().push_back({root});
  r.cnf.num_vars = enc.next() - 1;
  r.cnf.clauses = std::move(enc.clauses());
  return r;
}

namespace {

class Dpll {
 public:
  explicit Dpll(const Cnf& cnf)
      : n_(cnf.num_vars), value_(n_ + 1, -1), watches_(2 * (n_ + 1)) {
    for (const auto& c : cnf.clauses) {
      if (c.empty()) {
        trivially_unsat_ = true;
        continue;
      }
      if (c.size() == 1) {
        units_.push_back(c[0]);
        continue;
      }
      clauses_.push_back(c);
      auto ci = clauses_.size() - 1;
      watches_[index(c[0])].push_back(ci);
      watches_[index(c[1])].push_back(ci);
    }
  }

  /// Finds the next model; each call after a success continues the search.
  bool next_model() {
    if (trivially_unsat_) return false;
    if (!started_) {
      started_ = true;
      for (int u : units_) {
        int v = lit_value(u);
        if (v == 0) return false;
        if (v < 0) assign(u);
      }
    } else if (!backtrack()) {
      return false;
    }
    while (true) {
      if (!propagate()) {
        if (!backtrack()) return false;
        continue;
      }
      while (hint_ <= n_ && value_[hint_] >= 0) ++hint_;
      if (hint_ > n_) return true;
      ++decisions_;
      level_start_.push_back(trail_.size());
      flipped_.push_back(false);
      assign(-static_cast<int>(hint_));
    }
  }

  Assignment model() const {
    Assignment a(n_);
    for (std::size_t v = 1; v <= n_; ++v) a.set(static_cast<std::uint32_t>(v), value_[v] == 1);
    return a;
  }

  std::uint64_t decisions() const { return decisions_; }

 private:
  static std::size_t index(int lit) { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0); }

  // 1 true, 0 false, -1 unassigned
  int lit_value(int lit) const {
    int v = value_[static_cast<std::size_t>(std::abs(lit))];
    if (v < 0) return -1;
    return (v == 1) == (lit > 0) ? 1 : 0;
  }

  void assign(int lit) {
    value_[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? 1 : 0;
    trail_.push_back(lit);
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      int false_lit = -trail_[qhead_++];
      auto& ws = watches_[index(false_lit)];
      std::size_t i = 0, j = 0;
      bool conflict = false;
      while (i < ws.size()) {
        auto ci = ws[i++];
        auto& c = clauses_[ci];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[index(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (lit_value(c[0]) == 0) {
          conflict = true;
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          assign(c[0]);
        }
      }
      ws.resize(j);
      if (conflict) return false;
    }
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      auto v = static_cast<std::size_t>(std::abs(trail_.back()));
      value_[v] = -1;
      hint_ = std::min(hint_, v);
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, size);
  }

  bool backtrack() {
    while (!level_start_.empty()) {
      std::size_t start = level_start_.back();
      int decision = trail_[start];
      undo_to(start);
      if (!flipped_.back()) {
        flipped_.back() = true;
        assign(-decision);
        return true;
      }
      level_start_.pop_back();
      flipped_.pop_back();
    }
    return false;
  }

  std::size_t n_;
  std::vector<int> value_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<int> units_;
  std::vector<int> trail_;
  std::vector<std::size_t> level_start_;
  std::vector<bool> flipped_;
  std::size_t qhead_ = 0;
  std::size_t hint_ = 1;
  std::uint64_t decisions_ = 0;
  bool trivially_unsat_ = false;
  bool started_ = false;
};

}  // namespace

SatResult sat_solve(const Cnf& cnf) {
  cnf.validate();
  Dpll solver(cnf);
  SatResult r;
  r.satisfiable = solver.next_model();
  if (r.satisfiable) r.model = solver.model();
  r.decisions = solver.decisions();
  return r;
}

std::vector<Assignment> sat_enumerate(const Cnf& cnf, std::size_t project, std::size_t limit) {
  cnf.validate();
  Dpll solver(cnf);
  std::set<Assignment> seen;
  std::size_t models = 0;
  while (solver.next_model()) {
    seen.insert(solver.model().restrict(project));
    if (seen.size() > limit || ++models > limit * 64 + 1024)
      throw ResourceLimit("model enumeration exceeded limit of " + std::to_string(limit));
  }
  return {seen.begin(), seen.end()};
}

std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) os << lit << ' ';
    os << "0\n";
  }
  return os.str();
}

Cnf from_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  std::size_t declared_clauses = 0, parsed = 0;
  Cnf cnf;
  std::vector<int> current;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == 'c') continue;
    std::istringstream ls(line);
    if (line[first] == 'p') {
      if (have_header) throw InputError("duplicate DIMACS header");
      std::string p, fmt;
      long long v = -1, c = -1;
      if (!(ls >> p >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0) throw InputError("malformed DIMACS header");
      std::string rest;
      if (ls >> rest) throw InputError("malformed DIMACS header");
      cnf.num_vars = static_cast<std::size_t>(v);
      declared_clauses = static_cast<std::size_t>(c);
      have_header = true;
      continue;
    }
    if (!have_header) throw InputError("DIMACS clause before header");
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      long long lit = std::strtoll(tok.c_str(), &end, 10);
      if (*end != '\0') throw InputError("bad DIMACS token '" + tok + "'");
      if (lit == 0) {
        ++parsed;
        std::vector<int> clause;
        bool tautology = false;
        for (int l : current) {
          if (std::find(clause.begin(), clause.end(), -l) != clause.end()) tautology = true;
          if (std::find(clause.begin(), clause.end(), l) == clause.end()) clause.push_back(l);
        }
        if (!tautology) cnf.clauses.push_back(std::move(clause));
        current.clear();
        continue;
      }
      if (static_cast<std::size_t>(std::llabs(lit)) > cnf.num_vars)
        throw InputError("DIMACS literal " + tok + " out of range");
      current.push_back(static_cast<int>(lit));
    }
  }
  if (!have_header) throw InputError("missing DIMACS header");
  if (!current.empty()) throw InputError("unterminated DIMACS clause");
  if (parsed != declared_clauses) throw InputError("DIMACS header declares " + std::to_string(declared_clauses) +
                                                   " clauses but " + std::to_string(parsed) + " were given");
  return cnf;
}

std::optional<Assignment> brute_force_sat(const PropFormula& f, std::size_t num_vars) {
  if (num_vars > 24) throw ResourceLimit("brute_force_sat limited to 24 variables");
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << num_vars); ++m) {
    Assignment a(num_vars);
    for (std::size_t v = 0; v < num_vars; ++v) a.set(static_cast<std::uint32_t>(v + 1), (m >> v) & 1u);
    if (evaluate(f, a)) return a;
  }
  return std::nullopt;
}

PropFormula cnf_to_formula(const Cnf& cnf) {
  std::vector<PropFormula> clauses;
  for (const auto& c : cnf.clauses) {
    std::vector<PropFormula> lits;
    for (int l : c) {
      auto v = PropFormula::variable(static_cast<std::uint32_t>(std::abs(l)));
      lits.push_back(l > 0 ? std::move(v) : PropFormula::negation(std::move(v)));
    }
    clauses.push_back(PropFormula::disjunction(std::move(lits)));
  }
  return PropFormula::conjunction(std::move(clauses));
}

}  // namespace tfnp::prop
