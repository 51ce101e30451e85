#include "tfnp/pairs.hpp"

#include "tfnp/error.hpp"
#include "tfnp/paircode.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

namespace tfnp::pairs {

// ------------------------------------------------------------ resolution

namespace {

std::vector<int> normalized(std::vector<int> c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

bool contains(const std::vector<int>& c, int lit) { return std::binary_search(c.begin(), c.end(), lit); }

std::vector<std::string> split(std::string_view text, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (seps.find(ch) != std::string::npos) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ResolutionRefutation parse_refutation(std::string_view text) {
  ResolutionRefutation r;
  std::size_t line = 0;
  for (const auto& raw : split(text, "\n;")) {
    ++line;
    std::istringstream in(raw);
    std::string kw;
    if (!(in >> kw) || kw[0] == '#') continue;
    ResolutionStep s;
    long long a = -1, b = -1, p = -1;
    if (kw == "INIT") {
      in >> a;
      s.kind = ResolutionStep::Kind::Initial;
    } else if (kw == "RES") {
      in >> a >> b >> p;
      s.kind = ResolutionStep::Kind::Resolvent;
    } else {
      throw ParseError("unknown refutation step '" + kw + "'", line);
    }
    std::string extra;
    if (in.fail() || a < 0 || (s.kind == ResolutionStep::Kind::Resolvent && (b < 0 || p <= 0)) || (in >> extra))
      throw ParseError("malformed refutation step '" + raw + "'", line);
    s.i = static_cast<std::size_t>(a);
    s.j = static_cast<std::size_t>(std::max(b, 0LL));
    s.pivot = static_cast<std::uint32_t>(std::max(p, 0LL));
    r.steps.push_back(s);
  }
  return r;
}

std::string print_refutation(const ResolutionRefutation& r, char separator) {
  std::string out;
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const auto& s = r.steps[k];
    if (k) out += separator;
    if (s.kind == ResolutionStep::Kind::Initial)
      out += "INIT " + std::to_string(s.i);
    else
      out += "RES " + std::to_string(s.i) + " " + std::to_string(s.j) + " " + std::to_string(s.pivot);
  }
  return out;
}

ResolutionCheck check_resolution(const Cnf& cnf, const ResolutionRefutation& r) {
  std::vector<std::vector<int>> derived;
  auto fail = [](std::size_t k, const std::string& why) {
    return ResolutionCheck{false, "step " + std::to_string(k) + ": " + why};
  };
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const auto& s = r.steps[k];
    if (s.kind == ResolutionStep::Kind::Initial) {
      if (s.i >= cnf.clauses.size()) return fail(k, "clause index out of range");
      derived.push_back(normalized(cnf.clauses[s.i]));
      continue;
    }
    if (s.i >= k || s.j >= k) return fail(k, "premise does not precede the step");
    const int p = static_cast<int>(s.pivot);
    const auto& ci = derived[s.i];
    const auto& cj = derived[s.j];
    if (p <= 0 || !contains(ci, p)) return fail(k, "first premise lacks +" + std::to_string(p));
    if (!contains(cj, -p)) return fail(k, "second premise lacks -" + std::to_string(p));
    std::vector<int> res;
    for (int l : ci)
      if (l != p) res.push_back(l);
    for (int l : cj)
      if (l != -p) res.push_back(l);
    derived.push_back(normalized(std::move(res)));
  }
  if (derived.empty()) return {false, "empty refutation"};
  if (!derived.back().empty()) return {false, "last clause is not empty"};
  return {true, ""};
}

namespace {

// Branching search that returns, at each node, a derived clause falsified
// by the current partial assignment.
class Refuter {
 public:
  Refuter(const Cnf& cnf, std::size_t limit) : limit_(limit), value_(cnf.num_vars + 1, 0) {
    for (const auto& c : cnf.clauses) clauses_.push_back(normalized(c));
    for (const auto& c : clauses_)
      for (int l : c)
        if (static_cast<std::size_t>(std::abs(l)) >= value_.size()) value_.resize(std::abs(l) + 1, 0);
    init_step_.assign(clauses_.size(), SIZE_MAX);
  }

  std::optional<ResolutionRefutation> run() {
    auto top = search();
    if (!top) return std::nullopt;
    // Keep only the steps the final clause depends on.
    std::vector<bool> used(proof_.steps.size(), false);
    used[*top] = true;
    for (std::size_t k = *top + 1; k-- > 0;) {
      if (!used[k]) continue;
      const auto& s = proof_.steps[k];
      if (s.kind == ResolutionStep::Kind::Resolvent) used[s.i] = used[s.j] = true;
    }
    std::vector<std::size_t> remap(proof_.steps.size());
    ResolutionRefutation out;
    for (std::size_t k = 0; k <= *top; ++k) {
      if (!used[k]) continue;
      auto s = proof_.steps[k];
      if (s.kind == ResolutionStep::Kind::Resolvent) {
        s.i = remap[s.i];
        s.j = remap[s.j];
      }
      remap[k] = out.steps.size();
      out.steps.push_back(s);
    }
    return out;
  }

 private:
  int lit_value(int l) const { return l > 0 ? value_[l] : -value_[-l]; }

  std::size_t add(ResolutionStep s, std::vector<int> clause) {
    proof_.steps.push_back(s);
    step_clause_.push_back(std::move(clause));
    return proof_.steps.size() - 1;
  }

  std::optional<std::size_t> search() {
    if (++nodes_ > limit_) throw ResourceLimit("refutation search node limit");
    int branch = 0;
    std::size_t best = SIZE_MAX;
    for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
      std::size_t open = 0;
      bool sat = false;
      int pick = 0;
      for (int l : clauses_[ci]) {
        int v = lit_value(l);
        if (v > 0) {
          sat = true;
          break;
        }
        if (v == 0) {
          ++open;
          pick = std::abs(l);
        }
      }
      if (sat) continue;
      if (open == 0) {
        if (init_step_[ci] == SIZE_MAX)
          init_step_[ci] = add({ResolutionStep::Kind::Initial, ci, 0, 0}, clauses_[ci]);
        return init_step_[ci];
      }
      if (open < best) {
        best = open;
        branch = pick;
      }
    }
    if (branch == 0) return std::nullopt;  // every clause satisfied
    const int v = branch;
    value_[v] = 1;
    auto r1 = search();
    value_[v] = 0;
    if (!r1) return std::nullopt;
    if (!contains(step_clause_[*r1], -v)) return r1;
    value_[v] = -1;
    auto r0 = search();
    value_[v] = 0;
    if (!r0) return std::nullopt;
    if (!contains(step_clause_[*r0], v)) return r0;
    std::vector<int> res;
    for (int l : step_clause_[*r0])
      if (l != v) res.push_back(l);
    for (int l : step_clause_[*r1])
      if (l != -v) res.push_back(l);
    return add({ResolutionStep::Kind::Resolvent, *r0, *r1, static_cast<std::uint32_t>(v)}, normalized(std::move(res)));
  }

  std::size_t limit_;
  std::size_t nodes_ = 0;
  std::vector<int> value_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::size_t> init_step_;
  ResolutionRefutation proof_;
  std::vector<std::vector<int>> step_clause_;
};

}  // namespace

std::optional<ResolutionRefutation> find_refutation(const Cnf& cnf, std::size_t node_limit) {
  try {
    return Refuter(cnf, node_limit).run();
  } catch (const ResourceLimit&) {
    return std::nullopt;
  }
}

Cnf php_cnf(std::size_t pigeons, std::size_t holes) {
  Cnf cnf;
  cnf.num_vars = pigeons * holes;
  auto var = [&](std::size_t i, std::size_t h) { return static_cast<int>(i * holes + h + 1); };
  for (std::size_t i = 0; i < pigeons; ++i) {
    std::vector<int> c;
    for (std::size_t h = 0; h < holes; ++h) c.push_back(var(i, h));
    cnf.clauses.push_back(c);
  }
  for (std::size_t h = 0; h < holes; ++h)
    for (std::size_t i = 0; i < pigeons; ++i)
      for (std::size_t j = i + 1; j < pigeons; ++j) cnf.clauses.push_back({-var(i, h), -var(j, h)});
  return cnf;
}

Cnf negation_cnf(const PropFormula& phi) { return prop::tseitin(PropFormula::negation(phi)).cnf; }

// ------------------------------------------------------------ proof systems

std::string truth_table_string(const PropFormula& phi) {
  const std::uint32_t n = phi.max_var();
  if (n > 16) throw ResourceLimit("truth table over more than 16 variables");
  std::string out;
  out.reserve(std::size_t{1} << n);
  prop::Assignment a(n);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    for (std::uint32_t v = 1; v <= n; ++v) a.set(v, (k >> (n - v)) & 1);
    out += prop::evaluate(phi, a) ? '1' : '0';
  }
  return out;
}

bool is_tautology(const PropFormula& phi) {
  auto t = truth_table_string(phi);
  return t.find('0') == std::string::npos;
}

namespace {

const PropFormula& excluded_middle() {
  static const PropFormula f = prop::parse_formula("x1 | ~x1");
  return f;
}

// Splits "TAG:<formula>:<rest>"; formulas never contain ':'.
std::optional<std::pair<PropFormula, std::string>> split_proof(const std::string& proof, std::string_view tag) {
  if (proof.size() < tag.size() + 1 || proof.compare(0, tag.size(), tag) != 0 || proof[tag.size()] != ':')
    return std::nullopt;
  auto rest = proof.substr(tag.size() + 1);
  auto colon = rest.find(':');
  if (colon == std::string::npos) return std::nullopt;
  try {
    return std::make_pair(prop::parse_formula(rest.substr(0, colon)), rest.substr(colon + 1));
  } catch (const InputError&) {
    return std::nullopt;
  }
}

bool valid_table(const PropFormula& phi, const std::string& table) {
  try {
    if (phi.max_var() > 16 || table.size() != (std::size_t{1} << phi.max_var())) return false;
    if (table.find_first_not_of('1') != std::string::npos) return false;
    return truth_table_string(phi) == table;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

ProofSystem resolution_proof_system() {
  ProofSystem p;
  p.name = "Resolution";
  p.domain = ProofSystem::Domain::Taut;
  p.default_statement = excluded_middle();
  p.check = [](const std::string& proof) {
    if (auto res = split_proof(proof, "RES")) {
      try {
        if (check_resolution(negation_cnf(res->first), parse_refutation(res->second)).ok) return res->first;
      } catch (const InputError&) {
      }
    } else if (auto tt = split_proof(proof, "TAUT")) {
      if (valid_table(tt->first, tt->second)) return tt->first;
    }
    return excluded_middle();
  };
  return p;
}

ProofSystem truth_table_proof_system() {
  ProofSystem p;
  p.name = "TruthTable";
  p.domain = ProofSystem::Domain::Taut;
  p.default_statement = excluded_middle();
  p.check = [](const std::string& proof) {
    if (auto tt = split_proof(proof, "TT"); tt && valid_table(tt->first, tt->second)) return tt->first;
    return excluded_middle();
  };
  return p;
}

SimulationRecord truth_table_to_resolution() {
  SimulationRecord r;
  r.name = "TruthTable->Resolution";
  r.source = truth_table_proof_system();
  r.target = resolution_proof_system();
  r.length = {1, 1, 2};
  r.translate = [](const std::string& d) -> std::string {
    if (d.rfind("TT:", 0) == 0) return "TAUT" + d.substr(2);
    return "";  // non-proofs map to a non-proof with the same default
  };
  return r;
}

SimulationCheck check_simulation(const SimulationRecord& rec, const std::vector<std::string>& proofs) {
  SimulationCheck out;
  for (const auto& d : proofs) {
    auto t = rec.translate(d);
    if (t.size() > rec.length(d.size())) {
      out.pass = false;
      out.failures.push_back("too long: " + d);
    } else if (rec.target.check(t) != rec.source.check(d)) {
      out.pass = false;
      out.failures.push_back("different statement: " + d);
    }
  }
  return out;
}

// ------------------------------------------------------------ NP pairs

bool np_witness(const DisjointNPPair& pair, int member, const BitString& x, const BitString& y) {
  return y.size() <= pair.bound[member](x.size()) && pair.relation[member](x, y);
}

bool np_member(const DisjointNPPair& pair, int member, const BitString& x, std::size_t max_bits) {
  if (pair.decide) return pair.decide(x, member);
  const auto b = pair.bound[member](x.size());
  if (b > max_bits) throw ResourceLimit(pair.name + ": witness space too large to sweep");
  BitString y;
  for (;;) {
    if (pair.relation[member](x, y)) return true;
    y = next_length_lex(y);
    if (y.size() > b) return false;
  }
}

PairReduction compose(const PairReduction& first, const PairReduction& second) {
  return {first.name + ";" + second.name, [f1 = first.f, f2 = second.f](const BitString& x) { return f2(f1(x)); }};
}

PairReductionReport check_np_pair_reduction(const PairReduction& red, const DisjointNPPair& source,
                                            const DisjointNPPair& target, const std::vector<BitString>& domain) {
  PairReductionReport rep;
  for (const auto& x : domain) {
    for (int i = 0; i < 2; ++i) {
      if (!np_member(source, i, x)) continue;
      ++rep.checked;
      if (!np_member(target, i, red.f(x))) {
        rep.pass = false;
        if (!rep.counterexample) rep.counterexample = x;
      }
    }
  }
  return rep;
}

BitString np_pair_instance(const PropFormula& phi, std::size_t m) {
  return encode_tuple({BitString::from_bytes(prop::print_formula(phi)), BitString::ones(m)});
}

std::optional<std::pair<PropFormula, std::size_t>> decode_np_pair_instance(const BitString& x) {
  auto parts = decode_tuple(x, 2);
  if (!parts) return std::nullopt;
  auto text = (*parts)[0].to_bytes();
  if (!text || (*parts)[1] != BitString::ones((*parts)[1].size())) return std::nullopt;
  try {
    return std::make_pair(prop::parse_formula(*text), (*parts)[1].size());
  } catch (const InputError&) {
    return std::nullopt;
  }
}

DisjointNPPair canonical_np_pair(const ProofSystem& p) {
  DisjointNPPair pair;
  pair.name = "PR(" + p.name + ")";
  pair.bound = {PolyBound{8, 1, 0}, PolyBound{1, 2, 0}};
  pair.relation[0] = [check = p.check](const BitString& x, const BitString& y) {
    auto inst = decode_np_pair_instance(x);
    auto proof = y.to_bytes();
    return inst && proof && proof->size() <= inst->second && check(*proof) == inst->first;
  };
  pair.relation[1] = [](const BitString& x, const BitString& y) {
    auto inst = decode_np_pair_instance(x);
    if (!inst || y.size() != inst->first.max_var()) return false;
    std::vector<bool> bits;
    for (std::size_t i = 0; i < y.size(); ++i) bits.push_back(y[i]);
    return !prop::evaluate(inst->first, prop::Assignment::from_bits(bits));
  };
  pair.decide = [](const BitString& x, int member) {
    if (member == 0) throw ResourceLimit("membership in PR(P) needs a proof search");
    auto inst = decode_np_pair_instance(x);
    if (!inst) return false;
    return prop::brute_force_sat(PropFormula::negation(inst->first), inst->first.max_var()).has_value();
  };
  return pair;
}

PairReduction lift_simulation_to_pair_reduction(const SimulationRecord& rec) {
  return {"lift[" + rec.name + "]", [len = rec.length](const BitString& x) {
            auto inst = decode_np_pair_instance(x);
            if (!inst) return x;
            return np_pair_instance(inst->first, len(inst->second));
          }};
}

namespace {
bool even_value(const BitString& x) { return x.empty() || !x[x.size() - 1]; }
}  // namespace

DisjointNPPair even_odd_np_pair() {
  DisjointNPPair p;
  p.name = "EVEN/ODD";
  p.bound = {PolyBound{0, 0, 0}, PolyBound{0, 0, 0}};
  p.relation[0] = [](const BitString& x, const BitString& y) { return y.empty() && even_value(x); };
  p.relation[1] = [](const BitString& x, const BitString& y) { return y.empty() && !even_value(x); };
  return p;
}

DisjointNPPair high_bit_np_pair() {
  DisjointNPPair p;
  p.name = "LOW/HIGH";
  p.bound = {PolyBound{0, 0, 0}, PolyBound{0, 0, 0}};
  p.relation[0] = [](const BitString& x, const BitString& y) { return y.empty() && !x.empty() && !x[0]; };
  p.relation[1] = [](const BitString& x, const BitString& y) { return y.empty() && !x.empty() && x[0]; };
  return p;
}

std::string NpPairRegistry::certify(const std::string& name, const DisjointNPPair& pair) {
  return core::certificate(name + "/" + pair.bound[1].to_string(), pair.bound[0], "np-pair-registry");
}

void NpPairRegistry::admit(NpPairEntry e) {
  if (e.name.empty() || find(e.name)) throw InputError("bad or duplicate pair name '" + e.name + "'");
  if (e.cert != certify(e.name, e.pair)) throw InputError("certificate for '" + e.name + "' does not validate");
  entries_.push_back(std::move(e));
}

const NpPairEntry* NpPairRegistry::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

NpPairRegistry default_np_pair_registry() {
  NpPairRegistry reg;
  for (auto pair : {even_odd_np_pair(), high_bit_np_pair()}) {
    auto cert = NpPairRegistry::certify(pair.name, pair);
    reg.admit({pair.name, std::move(pair), cert});
  }
  return reg;
}

namespace {
std::uint64_t larger_bound(const DisjointNPPair& p, std::size_t n) { return std::max(p.bound[0](n), p.bound[1](n)); }
}  // namespace

DisjointNPPair universal_disjoint_np_pair(std::shared_ptr<const NpPairRegistry> registry) {
  auto resolve = [registry](const BitString& x) -> std::optional<std::pair<const NpPairEntry*, BitString>> {
    auto parts = decode_tuple(x, 4);
    if (!parts) return std::nullopt;
    auto name = (*parts)[1].to_bytes();
    auto cert = (*parts)[2].to_bytes();
    if (!name || !cert) return std::nullopt;
    const auto* e = registry->find(*name);
    if (!e || e->cert != *cert) return std::nullopt;
    if ((*parts)[3] != BitString::ones(larger_bound(e->pair, (*parts)[0].size()))) return std::nullopt;
    return std::make_pair(e, (*parts)[0]);
  };
  DisjointNPPair u;
  u.name = "UNIVERSAL-PAIR";
  u.bound = {PolyBound{1, 1, 0}, PolyBound{1, 1, 0}};
  for (int i = 0; i < 2; ++i)
    u.relation[i] = [resolve, i](const BitString& x, const BitString& y) {
      auto r = resolve(x);
      return r && np_witness(r->first->pair, i, r->second, y);
    };
  u.decide = [resolve](const BitString& x, int member) {
    auto r = resolve(x);
    return r && np_member(r->first->pair, member, r->second);
  };
  return u;
}

PairReduction embed_np_pair(std::shared_ptr<const NpPairRegistry> registry, const std::string& name) {
  const auto* e = registry->find(name);
  if (!e) throw InputError("pair '" + name + "' is not registered");
  return {"embed[" + name + "]", [registry, name](const BitString& x) {
            const auto* e = registry->find(name);
            return encode_tuple({x, BitString::from_bytes(name), BitString::from_bytes(e->cert),
                                 BitString::ones(larger_bound(e->pair, x.size()))});
          }};
}

}  // namespace tfnp::pairs
