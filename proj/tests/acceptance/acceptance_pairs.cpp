#include "criteria.hpp"
#include "tfnp/error.hpp"
#include "tfnp/paircode.hpp"
#include "tfnp/pairs.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

namespace tfnp::acceptance::detail {

using namespace tfnp::core;
using namespace tfnp::pairs;

CriterionResult conp_trichotomy_lifting(const Options& o) {
  Findings f;
  auto reg = std::make_shared<const Registry>(default_registry());
  auto u = universal_problem(reg);
  const auto target = canonical_conp_pair(normalize_padding(u));
  std::size_t instances = 0, members = 0, lifted = 0;

  struct Lift {
    std::string label;
    TFNPProblem source;
    ManyOneReduction red;
    TFNPProblem dest;
  };
  std::vector<Lift> lifts;
  for (const char* name : {"PIGEON-identity", "PIGEON-mod2", "FACTORING"})
    lifts.push_back({std::string(name) + "->U", reg->find(name)->problem, embed_reduction(reg, name), u});
  lifts.push_back({"FACTORING identity", factoring_problem(), identity_reduction(), factoring_problem()});

  for (const auto& l : lifts) {
    const auto padded = normalize_padding(l.source);
    const auto source_pair = canonical_conp_pair(padded);
    const auto dest_pair = l.dest.name == u.name ? target : canonical_conp_pair(normalize_padding(l.dest));
    const auto h = lift_tfnp_reduction_to_conp_pairs(l.red, l.source, l.dest, o.gate_cap);
    for (const auto& x : strings_up_to(6)) {
      for (const auto& c : conp_circuit_battery(padded.bound(x.size()), o.seed)) {
        ++instances;
        const auto inst = conp_instance(x, c);
        const auto m = conp_membership(source_pair, inst);
        if (m == Membership::Both) f.fail(l.label + ": (x,C) in both members at x=" + x.to_string());
        if (m != Membership::A0 && m != Membership::A1) continue;
        ++members;
        const auto image = h.f(inst);
        const auto m2 = conp_membership(dest_pair, image);
        ++lifted;
        if (m2 == Membership::Both) f.fail(l.label + ": lifted instance in both members");
        if (m2 != m) f.fail(l.label + ": membership lost at x=" + x.to_string());
      }
    }
    // Malformed inputs go to "0", which lies in neither member.
    for (const auto& bad : {BitString{1, 0, 1}, conp_instance(BitString{1}, circuit::Circuit{})}) {
      const auto image = h.f(bad);
      if (image != BitString{0}) f.fail(l.label + ": malformed input not mapped to 0");
      if (conp_membership(dest_pair, image) != Membership::Neither) f.fail(l.label + ": 0 is a member");
    }
  }
  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = std::to_string(instances) + " (x,C) instances never in both members, " + std::to_string(lifted) +
             " members lifted through " + std::to_string(lifts.size()) + " reductions, " + std::to_string(f.count()) +
             " violations";
  if (f.count()) r.detail += ": " + f.text();
  return r;
}

namespace {

PropFormula random_formula(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 4 == 0) {
    auto v = PropFormula::variable(static_cast<std::uint32_t>(1 + rng() % 4));
    return rng() % 2 ? PropFormula::negation(v) : v;
  }
  switch (rng() % 3) {
    case 0: return PropFormula::negation(random_formula(rng, depth - 1));
    case 1: return PropFormula::conjunction({random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
    default: return PropFormula::disjunction({random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
  }
}

// Mix in shapes that are tautologies by construction.
PropFormula random_candidate(std::mt19937_64& rng) {
  auto a = random_formula(rng, 3);
  switch (rng() % 3) {
    case 0: return PropFormula::disjunction({a, PropFormula::negation(a)});
    case 1: {
      auto b = random_formula(rng, 2);
      return PropFormula::disjunction({PropFormula::negation(PropFormula::conjunction({a, b})), a});
    }
    default: return a;
  }
}

}  // namespace

CriterionResult resolution_soundness(const Options& o) {
  Findings f;
  // Golden refutation of PHP(2,1).
  const auto golden = data_path(o, "golden/php21.refutation");
  {
    std::ifstream in(golden);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!in.good() && text.empty()) {
      f.fail("cannot read golden file " + golden);
    } else {
      try {
        auto chk = check_resolution(php_cnf(2, 1), parse_refutation(text));
        if (!chk.ok) f.fail("golden file " + golden + " does not validate: " + chk.diagnostic);
      } catch (const std::exception& e) {
        f.fail("golden file " + golden + " is corrupt: " + e.what());
      }
    }
  }
  std::mt19937_64 rng(o.seed ^ 0x7e5u);
  std::vector<PropFormula> formulas;
  std::set<std::string> seen;
  while (formulas.size() < 400) {
    auto phi = random_candidate(rng);
    if (seen.insert(print_formula(phi)).second) formulas.push_back(phi);
  }
  std::vector<std::pair<PropFormula, ResolutionRefutation>> accepted;
  std::size_t tautologies = 0, violations = 0, cross = 0;
  for (const auto& phi : formulas) {
    const bool taut = is_tautology(phi);
    tautologies += taut;
    auto ref = find_refutation(negation_cnf(phi));
    if (!ref) {
      if (taut) f.fail("no refutation found for tautology " + print_formula(phi));
      continue;
    }
    if (!check_resolution(negation_cnf(phi), *ref).ok) {
      f.fail("checker rejects a search refutation for " + print_formula(phi));
      continue;
    }
    if (!taut) {
      ++violations;
      f.fail("accepted refutation of a non-tautology " + print_formula(phi));
    }
    accepted.emplace_back(phi, *ref);
  }
  // Every refutation replayed against every other formula, and mutated.
  for (const auto& [phi, ref] : accepted) {
    for (const auto& psi : formulas) {
      ++cross;
      if (check_resolution(negation_cnf(psi), ref).ok && !is_tautology(psi)) {
        ++violations;
        f.fail("refutation for " + print_formula(phi) + " accepted for non-tautology " + print_formula(psi));
      }
    }
    for (std::size_t k = 0; k < ref.steps.size(); ++k) {
      auto mutant = ref;
      auto& s = mutant.steps[k];
      if (s.kind == ResolutionStep::Kind::Resolvent)
        s.pivot = s.pivot + 1;
      else
        s.i = s.i + 1;
      ++cross;
      for (const auto& psi : {phi, PropFormula::variable(1)})
        if (check_resolution(negation_cnf(psi), mutant).ok && !is_tautology(psi)) {
          ++violations;
          f.fail("mutated refutation accepted for non-tautology " + print_formula(psi));
        }
    }
  }
  // A wrong pivot is rejected outright.
  auto wrong = parse_refutation("INIT 0\nINIT 2\nRES 0 1 2\nINIT 1\nRES 3 2 2");
  if (check_resolution(php_cnf(2, 1), wrong).ok) f.fail("wrong-pivot refutation accepted");
  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = std::to_string(formulas.size()) + " formulas (" + std::to_string(tautologies) + " tautologies), " +
             std::to_string(accepted.size()) + " refutations, " + std::to_string(cross) + " replays, " +
             std::to_string(violations) + " soundness violations, PHP(2,1) golden refutation validates";
  if (!r.pass) r.detail = std::to_string(f.count()) + " failures: " + f.text();
  return r;
}

CriterionResult gamma_system(const Options&) {
  Stopwatch sw;
  Findings f;
  const auto composite = composite_sat_system();
  const auto standard = standard_sat_system();
  std::size_t composites = 0;
  for (std::uint64_t n = 0; n <= 1000; ++n) {
    const bool comp = is_composite(n);
    composites += comp;
    const auto cnf = gamma_cnf(n);
    const auto res = prop::sat_solve(cnf);
    if (res.satisfiable != comp) f.fail("gamma_" + std::to_string(n) + (comp ? " UNSAT" : " SAT"));
    if (res.satisfiable) {
      const std::size_t w = std::max<std::size_t>(1, bit_length(n));
      std::uint64_t a = 0, b = 0;
      for (std::size_t i = 0; i < w; ++i) {
        a = (a << 1) | res.model[static_cast<std::uint32_t>(2 * i + 1)];
        b = (b << 1) | res.model[static_cast<std::uint32_t>(2 * i + 2)];
      }
      if (a < 2 || b < 2 || a * b != n) f.fail("gamma_" + std::to_string(n) + " model is not a factorization");
    }
    const auto phi = gamma_formula(n);
    const auto text = print_formula(phi);
    if ((composite.check(text) == phi) != comp) f.fail("composite system wrong on bare gamma_" + std::to_string(n));
    if (standard.check(text) == phi) f.fail("standard system accepted bare gamma_" + std::to_string(n));
  }
  const double t = sw.seconds();
  if (t >= 120) f.fail("took " + std::to_string(t) + " s");
  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = "n <= 1000: " + std::to_string(composites) + " composites, SAT iff composite and bare acceptance iff composite, " +
             std::to_string(f.count()) + " disagreements";
  if (f.count()) r.detail += ": " + f.text();
  return r;
}

CriterionResult npmv_set_equality(const Options&) {
  Findings f;
  const auto divisor = divisor_npmv();
  const auto all = all_divisors_npmv();
  const auto domain = strings_up_to(7);
  auto shift = [](const BitString& x) {
    BitString y{0};
    y.append(x);
    return y;
  };
  auto positive = check_npmv_reduction(divisor, divisor, shift, domain);
  if (!positive.pass) f.fail("positive example (leading zero) fails");
  auto negative = check_npmv_reduction(divisor, all, [](const BitString& x) { return x; }, domain);
  if (negative.pass) f.fail("strict-inclusion control passes");
  std::size_t strict = 0;
  for (const auto& c : negative.cases) {
    const bool subset = std::includes(c.g_values.begin(), c.g_values.end(), c.f_values.begin(), c.f_values.end());
    if (!subset) f.fail("control is not an inclusion at x=" + c.x.to_string());
    strict += c.f_values != c.g_values;
  }
  // The flattened problem projects onto the value set.
  const auto flat = npmv_to_tfnp(divisor);
  for (const auto& x : strings_up_to(5)) {
    std::set<BitString> projected;
    for (const auto& w : all_witnesses(flat, x)) projected.insert((*decode_tuple(w, 2))[0]);
    const auto values = npmv_values(divisor, x);
    if (std::vector<BitString>(projected.begin(), projected.end()) != values) f.fail("projection differs at x=" + x.to_string());
  }
  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = "positive example passes on " + std::to_string(domain.size()) + " instances, inclusion control fails (" +
             std::to_string(strict) + " strict cases)";
  if (!r.pass) r.detail = f.text();
  return r;
}

}  // namespace tfnp::acceptance::detail
