#include "criteria.hpp"
#include "tfnp/error.hpp"
#include "tfnp/programs.hpp"
#include "tfnp/reduction.hpp"

#include <algorithm>
#include <map>

namespace tfnp::acceptance::detail {

using namespace tfnp::core;

namespace {

std::vector<BitString> numbers(std::uint64_t hi) {
  std::vector<BitString> out;
  for (std::uint64_t v = 0; v <= hi; ++v) out.push_back(BitString::from_uint(v));
  return out;
}

std::string describe(const ReductionReport& r) {
  std::string s = r.reduction + " on " + std::to_string(r.cases.size()) + " instances";
  if (r.counterexample) {
    const auto& [x, z, y] = *r.counterexample;
    s += " (counterexample x=" + x.to_string() + " z=" + z.to_string() + " g=" + y.to_string() + ")";
  }
  return s;
}

}  // namespace

CriterionResult many_one_contract(const Options& o) {
  Findings f;
  std::size_t positives = 0, negatives = 0, witnesses = 0;
  auto expect_pass = [&](const ManyOneReduction& red, const TFNPProblem& src, const TFNPProblem& dst,
                         const std::vector<BitString>& domain) {
    auto rep = check_many_one(red, src, dst, domain);
    ++positives;
    for (const auto& c : rep.cases) witnesses += c.checks.size();
    if (!rep.pass) f.fail("expected PASS: " + describe(rep));
  };
  auto expect_fail = [&](const ManyOneReduction& red, const TFNPProblem& src, const TFNPProblem& dst,
                         const std::vector<BitString>& domain) {
    auto rep = check_many_one(red, src, dst, domain);
    ++negatives;
    if (rep.pass || !rep.counterexample) f.fail("negative control passed: " + describe(rep));
  };

  auto fact = factoring_problem();
  auto succ = succ_problem();
  expect_pass(identity_reduction(), fact, fact, numbers(64));
  expect_pass(identity_reduction(), succ, succ, strings_up_to(6));

  auto hcs = hcs_problem(php_sentence());
  for (const auto& fam : pigeon_battery(o.seed)) expect_pass(pigeon_to_hcs_reduction(fam), pigeon_problem(fam), hcs, numbers(8));

  auto reg = std::make_shared<const Registry>(default_registry());
  auto u = universal_problem(reg);
  for (const auto& e : reg->entries()) expect_pass(embed_reduction(reg, e.name), e.problem, u, e.test_domain);

  expect_fail(broken_reduction(), fact, fact, numbers(64));
  expect_fail(broken_reduction(), succ, succ, strings_up_to(6));
  expect_fail(compose(broken_reduction(), embed_reduction(reg, "SUCC")), succ, u, strings_up_to(4));

  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = std::to_string(positives) + " reductions pass over " + std::to_string(witnesses) + " witness checks, " +
             std::to_string(negatives) + " negative controls fail with counterexamples";
  if (!r.pass) r.detail += "; failures: " + f.text();
  return r;
}

namespace {

// Positions of each oracle gate's answer bits, in gate order.
std::vector<std::vector<std::size_t>> answer_blocks(const circuit::Circuit& c) {
  std::map<std::size_t, std::vector<std::size_t>> by_gate;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& g = c.gates()[i];
    if (g.kind != circuit::Gate::Kind::Answer) continue;
    auto& v = by_gate[g.a];
    if (v.size() <= g.b) v.resize(g.b + 1);
    v[g.b] = i;
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& [k, v] : by_gate) out.push_back(v);
  return out;
}

}  // namespace

CriterionResult completion_lemma(const Options& o) {
  Findings f;
  std::size_t instances = 0, tampers = 0;
  for (const auto& t : {succ_once_reduction(), succ_twice_reduction(), succ_direct_reduction()}) {
    auto wrapped = wrap_completion(t.oracle);
    auto red = turing_to_many_one(t, o.gate_cap);
    auto rep = check_many_one(red, t.source, wrapped, strings_up_to(10));
    instances += rep.cases.size();
    if (!rep.pass) f.fail(describe(rep));
    for (const auto& c : rep.cases)
      if (c.checks.empty()) f.fail(t.name + ": no transcript for x=" + c.x.to_string());
  }
  // Forged transcripts: every single-bit flip, swapped answers, truncation.
  for (const auto& t : {succ_once_reduction(), succ_twice_reduction()}) {
    auto wrapped = wrap_completion(t.oracle);
    auto solver = [&](const BitString& q) { return solve_brute(t.oracle, q); };
    for (const auto& x : strings_up_to(6)) {
      const auto c = turing_circuit(t, x.size(), o.gate_cap);
      const auto u = completion_instance(x, c);
      const auto v = transcript(c, x, t.oracle, solver);
      if (!verify_solution(wrapped, u, v)) f.fail(t.name + ": honest transcript rejected at x=" + x.to_string());
      auto expect_reject = [&](const BitString& forged, const std::string& what) {
        ++tampers;
        if (forged != v && verify_solution(wrapped, u, forged)) f.fail(t.name + ": forged (" + what + ") accepted at x=" + x.to_string());
      };
      for (std::size_t i = 0; i < v.size(); ++i) {
        auto w = v;
        w.set(i, !w[i]);
        expect_reject(w, "bit " + std::to_string(i));
      }
      auto blocks = answer_blocks(c);
      if (blocks.size() == 2 && blocks[0].size() == blocks[1].size()) {
        auto w = v;
        for (std::size_t j = 0; j < blocks[0].size(); ++j) {
          w.set(blocks[0][j], v[blocks[1][j]]);
          w.set(blocks[1][j], v[blocks[0][j]]);
        }
        expect_reject(w, "swapped answers");
      }
      if (!v.empty()) expect_reject(v.slice(0, v.size() - 1), "truncated");
    }
  }
  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = std::to_string(instances) + " instances (widths <= 10) pass, " + std::to_string(tampers) +
             " forged transcripts all rejected";
  if (!r.pass) r.detail = std::to_string(f.count()) + " failures: " + f.text();
  return r;
}

namespace {

// Every way to split at most `total` bits among `arity` inputs.
void shapes(std::size_t arity, std::size_t total, std::vector<std::size_t>& cur,
            std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == arity) {
    out.push_back(cur);
    return;
  }
  for (std::size_t w = 0; w <= total; ++w) {
    cur.push_back(w);
    shapes(arity, total - w, cur, out);
    cur.pop_back();
  }
}

struct Expected {
  bool accept = false;
  bool finished = false;
  BitString tape;
};

}  // namespace

CriterionResult compiler_equivalence(const Options& o) {
  constexpr std::size_t kTotal = 12;
  constexpr std::size_t kTape = kTotal;
  Findings f;
  std::size_t programs_checked = 0, inputs_checked = 0;
  for (const auto& name : programs::names()) {
    const auto p = programs::load(name);
    ++programs_checked;
    const bool oracle = p.uses_oracle();
    TFNPProblem oracle_problem;
    if (oracle) oracle_problem = name.rfind("factoring", 0) == 0 ? factoring_problem() : succ_problem();
    // Answers are deterministic, so repeated queries are served from a cache.
    std::map<BitString, BitString> answers;
    auto solve = [&](const BitString& q) {
      auto it = answers.find(q);
      if (it == answers.end()) it = answers.emplace(q, solve_brute(oracle_problem, q)).first;
      return it->second;
    };
    std::vector<std::vector<std::size_t>> all;
    std::vector<std::size_t> cur;
    shapes(p.arity, kTotal, cur, all);
    for (const auto& shape : all) {
      std::vector<vm::InputSpec> specs;
      std::size_t width = 0;
      for (auto w : shape) {
        specs.push_back(vm::InputSpec::free(w));
        width += w;
      }
      vm::CompileOptions verdict_opts, tape_opts;
      verdict_opts.gate_cap = tape_opts.gate_cap = o.gate_cap;
      tape_opts.tape_output = true;
      tape_opts.tape_bound = kTape;
      if (oracle) verdict_opts.answer_bound = tape_opts.answer_bound = [&](std::size_t n) { return oracle_problem.bound(n); };
      const auto vc = vm::compile_to_circuit(p, specs, verdict_opts).circuit;
      const auto tc = vm::compile_to_circuit(p, specs, tape_opts).circuit;

      const std::uint64_t count = std::uint64_t{1} << width;
      for (std::uint64_t base = 0; base < count; base += 64) {
        const std::size_t lanes_used = static_cast<std::size_t>(std::min<std::uint64_t>(64, count - base));
        std::vector<Expected> expect(lanes_used);
        std::vector<BitString> flat(lanes_used);
        for (std::size_t l = 0; l < lanes_used; ++l) {
          flat[l] = width ? BitString::from_uint(base + l, width) : BitString{};
          std::vector<BitString> in;
          std::size_t off = 0;
          for (auto w : shape) {
            in.push_back(flat[l].slice(off, w));
            off += w;
          }
          try {
            auto res = vm::run(p, in, oracle ? vm::RunOracle(solve) : vm::RunOracle());
            expect[l] = {res.accepted(), true,
                         res.output.size() <= kTape ? pad_to_width(res.output, kTape + 1) : BitString::zeros(kTape + 1)};
          } catch (const BudgetExceeded&) {
            expect[l] = {false, false, {}};
          }
        }
        std::vector<bool> got_verdict(lanes_used);
        std::vector<BitString> got_tape(lanes_used);
        if (!oracle) {
          std::vector<std::uint64_t> lanes(width, 0);
          for (std::size_t l = 0; l < lanes_used; ++l)
            for (std::size_t i = 0; i < width; ++i)
              if (flat[l][i]) lanes[i] |= std::uint64_t{1} << l;
          auto v = circuit::eval_lanes(vc, lanes);
          auto t = circuit::eval_lanes(tc, lanes);
          for (std::size_t l = 0; l < lanes_used; ++l) {
            got_verdict[l] = (v[0] >> l) & 1;
            for (auto word : t) got_tape[l].push_back((word >> l) & 1);
          }
        } else {
          auto answer = [&](const BitString& q) { return pad_to_width(solve(q), oracle_problem.bound(q.size()) + 1); };
          for (std::size_t l = 0; l < lanes_used; ++l) {
            got_verdict[l] = circuit::eval_oracle_circuit(vc, flat[l], answer).outputs[0];
            got_tape[l] = circuit::eval_oracle_circuit(tc, flat[l], answer).outputs;
          }
        }
        for (std::size_t l = 0; l < lanes_used; ++l) {
          ++inputs_checked;
          const bool bad = got_verdict[l] != expect[l].accept || (expect[l].finished && got_tape[l] != expect[l].tape);
          if (bad) f.fail(name + " disagrees on input " + flat[l].to_string());
        }
      }
    }
  }
  CriterionResult r;
  r.pass = f.count() == 0;
  r.detail = std::to_string(programs_checked) + " programs, " + std::to_string(inputs_checked) +
             " inputs up to total width 12, " + std::to_string(f.count()) + " disagreements";
  if (f.count()) r.detail += ": " + f.text();
  return r;
}

}  // namespace tfnp::acceptance::detail
