#include "acceptance.hpp"

#include "criteria.hpp"
#include "tfnp/error.hpp"
#include "tfnp/problem.hpp"
#include "tfnp/prop.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace tfnp::acceptance {

using namespace detail;
using logic::Formula;
using logic::Term;

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "hcs-correctness", {"logic", "hcs"}, hcs_correctness},
      {2, "herbrand-brute-force", {"logic", "hcs", "prop"}, herbrand_brute_force},
      {3, "totality-sweeps", {"tfnp"}, totality_sweeps},
      {4, "many-one-contract", {"tfnp", "reduction"}, many_one_contract},
      {5, "completion-lemma", {"tfnp", "reduction", "completion"}, completion_lemma},
      {6, "conp-trichotomy-lifting", {"pairs", "conp"}, conp_trichotomy_lifting},
      {7, "compiler-equivalence", {"vm", "compiler"}, compiler_equivalence},
      {8, "resolution-soundness", {"pairs", "resolution", "prop"}, resolution_soundness},
      {9, "composite-sat-system", {"pairs", "sat"}, gamma_system},
      {10, "numeral-size", {"logic", "numerals"}, numeral_size},
      {11, "npmv-set-equality", {"pairs", "npmv"}, npmv_set_equality},
  };
  return all;
}

bool selected(const Criterion& c, const std::string& filter) {
  if (filter.empty() || filter == std::to_string(c.id)) return true;
  if (std::find(c.tags.begin(), c.tags.end(), filter) != c.tags.end()) return true;
  return c.name.find(filter) != std::string::npos;
}

std::vector<CriterionResult> run(const Options& options, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!selected(c, options.filter)) continue;
    Stopwatch sw;
    CriterionResult r;
    try {
      r = c.run(options);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("uncaught error: ") + e.what();
    }
    r.id = c.id;
    r.name = c.name;
    r.tags = c.tags;
    r.seconds = sw.seconds();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.2f s)", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + " " + (r.id < 10 ? " " : "") + std::to_string(r.id) + " " + r.name +
         "  " + r.detail + buf;
}

// ------------------------------------------------------------ sentences

namespace {

// Terms are classified by (head, depth mod 2); the planted model decides
// every atom from the classes of its arguments, so truth of a clause under
// all realizable classes is exact truth in the model.
struct PlantedModel {
  std::uint32_t p_table = 0;               // bit per class
  std::array<std::uint32_t, 6> r_table{};  // r_table[c1] bit c2

  static int klass(const Term& t) {
    const int head = t.head == "a" ? 0 : t.head == "b" ? 1 : 2;
    return head * 2 + static_cast<int>(t.depth() % 2);
  }
  bool atom(const std::string& rel, const std::vector<int>& classes) const {
    if (rel == "P") return (p_table >> classes[0]) & 1;
    return (r_table[classes[0]] >> classes[1]) & 1;
  }
};

// Realizable classes: a, b at depth 0, f-terms at both parities.
constexpr int kClasses[] = {0, 2, 4, 5};

// Class of a term in the matrix under a class assignment to x and y.
int term_class(const Term& t, int cx, int cy) {
  if (t.is_variable) return t.head == "x" ? cx : cy;
  if (t.head != "f") return PlantedModel::klass(t);
  const int inner = term_class(t.args[0], cx, cy);
  return 4 + (inner % 2 == 0 ? 1 : 0);
}

bool holds(const Formula& f, const PlantedModel& m, int cx, int cy) {
  switch (f.kind) {
    case Formula::Kind::Atom: {
      std::vector<int> cls;
      for (const auto& a : f.args) cls.push_back(term_class(a, cx, cy));
      return m.atom(f.relation, cls);
    }
    case Formula::Kind::False: return false;
    case Formula::Kind::Not: return !holds(f.children[0], m, cx, cy);
    case Formula::Kind::And: return holds(f.children[0], m, cx, cy) && holds(f.children[1], m, cx, cy);
    case Formula::Kind::Or: return holds(f.children[0], m, cx, cy) || holds(f.children[1], m, cx, cy);
    case Formula::Kind::Implies: return !holds(f.children[0], m, cx, cy) || holds(f.children[1], m, cx, cy);
  }
  return false;
}

}  // namespace

std::vector<GeneratedSentence> generate_consistent_sentences(std::size_t count, std::size_t max_atoms,
                                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
  const auto sig = logic::Signature::parse("a/0 b/0 f/1", "P/1 R/2");
  const auto ground = logic::enumerate_herbrand_terms(sig, 1);
  std::vector<GeneratedSentence> out;
  while (out.size() < count) {
    PlantedModel m;
    m.p_table = static_cast<std::uint32_t>(rng());
    for (auto& row : m.r_table) row = static_cast<std::uint32_t>(rng());
    const bool two_vars = rng() % 2;
    std::vector<std::string> vars = two_vars ? std::vector<std::string>{"x", "y"} : std::vector<std::string>{"x"};
    std::vector<Term> pool{Term::var("x"), Term::app("a"), Term::app("b"), Term::app("f", {Term::var("x")})};
    if (two_vars) {
      pool.push_back(Term::var("y"));
      pool.push_back(Term::app("f", {Term::var("y")}));
    }
    auto pick = [&] { return pool[rng() % pool.size()]; };
    auto literal = [&] {
      Formula a = rng() % 2 ? Formula::atom("P", {pick()}) : Formula::atom("R", {pick(), pick()});
      return rng() % 2 ? Formula::negation(a) : a;
    };
    auto true_everywhere = [&](const Formula& f) {
      for (int cx : kClasses)
        for (int cy : kClasses)
          if (!holds(f, m, cx, cy)) return false;
      return true;
    };
    std::vector<Formula> clauses;
    const std::size_t want = 2 + rng() % 3;
    for (int attempt = 0; attempt < 200 && clauses.size() < want; ++attempt) {
      const std::size_t width = 1 + rng() % 3;
      Formula c = literal();
      for (std::size_t i = 1; i < width; ++i) c = Formula::disjunction(c, literal());
      if (width == 2 && c.children[0].kind == Formula::Kind::Not)
        c = Formula::implication(c.children[0].children[0], c.children[1]);
      // The matrix must mention a variable to be a real universal sentence.
      if (c.to_string().find_first_of("xy") == std::string::npos) continue;
      if (true_everywhere(c)) clauses.push_back(c);
    }
    if (clauses.size() < 2) continue;
    Formula matrix = clauses[0];
    for (std::size_t i = 1; i < clauses.size(); ++i) matrix = Formula::conjunction(matrix, clauses[i]);
    GeneratedSentence g;
    g.sentence = logic::parse_sentence(logic::UniversalSentence{sig, vars, matrix}.to_string(), sig);
    std::vector<std::vector<Term>> candidates;
    for (const auto& s : ground) {
      if (!two_vars) {
        candidates.push_back({s});
        continue;
      }
      for (const auto& t : ground) candidates.push_back({s, t});
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    for (const auto& t : candidates) {
      g.tuples.push_back(t);
      if (logic::herbrand_expand(g.sentence, g.tuples).atoms.size() > max_atoms) g.tuples.pop_back();
    }
    if (g.tuples.empty()) continue;
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GeneratedSentence> inconsistent_sentences() {
  struct Raw {
    const char* functions;
    const char* relations;
    const char* text;
    std::vector<const char*> tuples;  // comma separated terms per tuple
  };
  const std::vector<Raw> raw = {
      {"c/0", "R/2", "forall x. R(x,x) & ~R(x,x)", {"c"}},
      {"c/0 f/1", "P/1", "forall x. P(x) & ~P(f(x))", {"c", "f(c)"}},
      {"c/0 f/1", "R/2", "forall x,y. (R(x,y) -> R(y,x)) & R(c,f(x)) & ~R(f(y),c)", {"c,c", "c,f(c)"}},
      {"c/0", "P/1 Q/1", "forall x. (P(x) | Q(x)) & ~P(x) & (Q(x) -> P(x))", {"c"}},
      {"c/0 f/1", "P/1 Q/1", "forall x. (P(x) -> Q(f(x))) & P(c) & ~Q(f(x))", {"c"}},
  };
  std::vector<GeneratedSentence> out;
  for (const auto& r : raw) {
    GeneratedSentence g;
    auto sig = logic::Signature::parse(r.functions, r.relations);
    g.sentence = logic::parse_sentence(r.text, sig);
    for (const char* t : r.tuples) {
      std::vector<Term> tuple;
      std::string s(t);
      std::size_t depth = 0, start = 0;
      for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i < s.size() && s[i] == '(') ++depth;
        if (i < s.size() && s[i] == ')') --depth;
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
          tuple.push_back(logic::parse_ground_term(s.substr(start, i - start), sig));
          start = i + 1;
        }
      }
      g.tuples.push_back(tuple);
    }
    out.push_back(std::move(g));
  }
  return out;
}

namespace detail {

std::string data_path(const Options& o, const std::string& relative) {
#ifdef TFNP_DATA_DIR
  const std::string base = o.data_dir.empty() ? TFNP_DATA_DIR : o.data_dir;
#else
  const std::string base = o.data_dir.empty() ? "data" : o.data_dir;
#endif
  return base + "/" + relative;
}

namespace {

bool solve_and_check(const logic::GroundConjunction& g, std::string& why) {
  auto cnf = prop::tseitin(g.propositional).cnf;
  auto res = prop::sat_solve(cnf);
  if (!res.satisfiable) {
    why = "UNSAT";
    return false;
  }
  std::vector<bool> bits;
  for (std::size_t i = 1; i <= g.atoms.size(); ++i) bits.push_back(res.model[static_cast<std::uint32_t>(i)]);
  if (!g.evaluate(bits)) {
    why = "model rejected by direct evaluation";
    return false;
  }
  return true;
}

std::optional<std::vector<bool>> brute_force_model(const logic::GroundConjunction& g) {
  const std::size_t n = g.atoms.size();
  std::vector<bool> bits(n);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    for (std::size_t i = 0; i < n; ++i) bits[i] = (k >> i) & 1;
    if (g.evaluate(bits)) return bits;
  }
  return std::nullopt;
}

}  // namespace

CriterionResult hcs_correctness(const Options& o) {
  Stopwatch sw;
  Findings f;
  auto sentences = generate_consistent_sentences(24, 20, o.seed);
  std::size_t max_atoms = 0;
  for (const auto& s : sentences) {
    auto g = logic::herbrand_expand(s.sentence, s.tuples);
    max_atoms = std::max(max_atoms, g.atoms.size());
    if (g.atoms.size() > 20) f.fail("expansion too large: " + s.sentence.to_string());
    std::string why;
    if (!solve_and_check(g, why)) f.fail(why + ": " + s.sentence.to_string());
  }
  auto bad = inconsistent_sentences();
  for (const auto& s : bad) {
    auto g = logic::herbrand_expand(s.sentence, s.tuples);
    if (prop::sat_solve(prop::tseitin(g.propositional).cnf).satisfiable) f.fail("SAT for inconsistent " + s.sentence.to_string());
  }
  const double t = sw.seconds();
  if (t >= 10) f.fail("took " + std::to_string(t) + " s");
  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = std::to_string(sentences.size()) + " consistent sentences (max " + std::to_string(max_atoms) +
             " atoms) SAT and verified, " + std::to_string(bad.size()) + " inconsistent UNSAT";
  if (!r.pass) r.detail += "; failures: " + f.text();
  return r;
}

CriterionResult herbrand_brute_force(const Options& o) {
  Findings f;
  auto sentences = generate_consistent_sentences(24, 12, o.seed + 1);
  for (auto& s : inconsistent_sentences()) sentences.push_back(std::move(s));
  std::size_t models = 0, checked = 0;
  for (const auto& s : sentences) {
    auto g = logic::herbrand_expand(s.sentence, s.tuples);
    if (g.atoms.size() > 12) continue;
    ++checked;
    const bool brute = brute_force_model(g).has_value();
    const bool solver = prop::sat_solve(prop::tseitin(g.propositional).cnf).satisfiable;
    models += brute;
    if (brute != solver) f.fail("disagreement on " + s.sentence.to_string());
  }
  CriterionResult r;
  r.pass = f.count() == 0 && checked >= 20;
  r.detail = std::to_string(checked) + " expansions, " + std::to_string(models) + " with brute-force models, " +
             std::to_string(f.count()) + " disagreements";
  if (f.count()) r.detail += ": " + f.text();
  return r;
}

CriterionResult totality_sweeps(const Options& o) {
  Stopwatch sw;
  Findings f;
  std::size_t pigeon_cases = 0;
  for (const auto& fam : core::pigeon_battery(o.seed)) {
    auto p = core::pigeon_problem(fam);
    // Every encoding of every r <= 16, leading zeros included.
    for (const auto& r : core::strings_up_to(5)) {
      if (r.to_uint() > 16) continue;
      ++pigeon_cases;
      try {
        auto y = core::solve_brute(p, r);
        if (!core::verify_solution(p, r, y)) f.fail("PIGEON[" + fam.name + "] bad witness at r=" + r.to_string());
      } catch (const TotalityViolation&) {
        f.fail("TOTALITY_VIOLATION PIGEON[" + fam.name + "] r=" + r.to_string());
      }
    }
  }
  auto fact = core::factoring_problem();
  std::size_t violations = 0;
  for (std::uint64_t n = 0; n <= (std::uint64_t{1} << 16); ++n) {
    const auto x = BitString::from_uint(n);
    bool found = core::verify_solution(fact, x, BitString{});
    for (std::uint64_t m = 2; !found && m * m <= n; ++m)
      if (n % m == 0) found = core::verify_solution(fact, x, BitString::from_uint(m));
    if (!found) {
      ++violations;
      f.fail("TOTALITY_VIOLATION FACTORING N=" + std::to_string(n));
    }
  }
  const double t = sw.seconds();
  if (t >= 60) f.fail("took " + std::to_string(t) + " s");
  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = std::to_string(pigeon_cases) + " PIGEON instances over the battery, FACTORING for all N <= 2^16, " +
             std::to_string(violations) + " factoring violations";
  if (!r.pass) r.detail += "; failures: " + f.text();
  return r;
}

CriterionResult numeral_size(const Options&) {
  std::size_t wrong_value = 0, too_big = 0;
  std::uint64_t first_big = 0, worst_n = 0;
  std::size_t worst_size = 0;
  for (std::uint64_t n = 0; n <= (std::uint64_t{1} << 16); ++n) {
    const auto t = logic::binary_numeral(n);
    if (logic::evaluate_arithmetic(t) != n) ++wrong_value;
    const std::size_t bits = std::max<std::size_t>(1, bit_length(n));
    if (t.size() > 6 * bits) {
      if (too_big++ == 0) first_big = n;
      if (t.size() * 1000 / bits > worst_size * 1000 / std::max<std::size_t>(1, bit_length(worst_n))) {
        worst_n = n;
        worst_size = t.size();
      }
    }
  }
  CriterionResult r;
  r.pass = wrong_value == 0 && too_big == 0;
  r.detail = "values wrong: " + std::to_string(wrong_value) + ", size > 6*bits(n): " + std::to_string(too_big);
  if (too_big)
    r.detail += " (first n=" + std::to_string(first_big) + ", e.g. n=" + std::to_string(worst_n) + " has " +
                std::to_string(worst_size) + " nodes vs bound " +
                std::to_string(6 * std::max<std::size_t>(1, bit_length(worst_n))) + ")";
  return r;
}

}  // namespace detail
}  // namespace tfnp::acceptance
