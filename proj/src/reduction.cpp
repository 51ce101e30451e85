#include "tfnp/reduction.hpp"

#include "tfnp/error.hpp"
#include "tfnp/paircode.hpp"
#include "tfnp/programs.hpp"

#include <algorithm>
#include <set>

namespace tfnp::core {

ManyOneReduction identity_reduction() {
  return {"identity", [](const BitString& x) { return x; }, [](const BitString&, const BitString& z) { return z; },
          programs::load("copy_witness")};
}

ManyOneReduction broken_reduction() {
  return {"broken-drop-last-bit", [](const BitString& x) { return x; },
          [](const BitString&, const BitString& z) { return z.empty() ? z : z.slice(0, z.size() - 1); },
          std::nullopt};
}

ManyOneReduction compose(const ManyOneReduction& red1, const ManyOneReduction& red2) {
  ManyOneReduction r;
  r.name = red1.name + ";" + red2.name;
  r.f = [f1 = red1.f, f2 = red2.f](const BitString& x) { return f2(f1(x)); };
  r.g = [f1 = red1.f, g1 = red1.g, g2 = red2.g](const BitString& x, const BitString& z) { return g1(x, g2(f1(x), z)); };
  return r;
}

BitString apply_many_one(const ManyOneReduction& red, const TFNPProblem& target, const Solver& s_solver,
                         const TFNPProblem& source, const BitString& x) {
  const BitString fx = red.f(x);
  const BitString z = s_solver(fx);
  if (!verify_solution(target, fx, z))
    throw InputError("solver for " + target.name + " returned an invalid witness");
  BitString y = red.g(x, z);
  if (!verify_solution(source, x, y))
    throw ReductionUnsound(red.name + ": g(x, z) fails " + source.name + " at x = " + x.to_hex());
  return y;
}

ReductionReport check_many_one(const ManyOneReduction& red, const TFNPProblem& source, const TFNPProblem& target,
                               const std::vector<BitString>& domain) {
  ReductionReport rep;
  rep.reduction = red.name;
  for (const auto& x : domain) {
    ReductionCase c;
    c.x = x;
    c.fx = red.f(x);
    for (const auto& z : all_witnesses(target, c.fx)) {
      WitnessCheck w{z, red.g(x, z), false};
      w.ok = verify_solution(source, x, w.y);
      if (!w.ok) {
        c.pass = false;
        if (!rep.counterexample) rep.counterexample = std::make_tuple(x, z, w.y);
      }
      c.checks.push_back(std::move(w));
    }
    rep.pass = rep.pass && c.pass;
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

// ------------------------------------------------------------ PIGEON -> HCS

std::vector<std::vector<logic::Term>> pigeon_hcs_tuples(const PigeonMap& map, const BitString& r) {
  const std::uint64_t rv = r.to_uint();
  if (rv > 64) throw ResourceLimit("PIGEON to HCS reduction handles r <= 64");
  std::vector<std::uint64_t> fx(rv + 1);
  for (std::uint64_t x = 0; x <= rv; ++x) fx[x] = map.apply(r, x);
  std::set<std::pair<std::uint64_t, std::uint64_t>> tuples;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> work;
  for (std::uint64_t a = 0; a <= rv; ++a) {
    work.emplace_back(fx[a], rv);
    for (std::uint64_t b = a + 1; b <= rv; ++b) work.emplace_back(fx[a], fx[b]);
  }
  // Downward closure makes every Eq/Ge atom of the expansion forced.
  while (!work.empty()) {
    auto t = work.back();
    work.pop_back();
    if (!tuples.insert(t).second) continue;
    auto [i, j] = t;
    if (i > 0 && j > 0) work.emplace_back(i - 1, j - 1);
    else if (i == 0 && j > 0) work.emplace_back(0, j - 1);
    else if (i > 0 && j == 0) work.emplace_back(i - 1, 0);
  }
  std::vector<std::vector<logic::Term>> out;
  for (auto [i, j] : tuples) out.push_back({unary_numeral(i), unary_numeral(j)});
  return out;
}

ManyOneReduction pigeon_to_hcs_reduction(const PigeonFamily& family) {
  auto map = pigeon_map(family);
  auto phi = std::make_shared<const logic::UniversalSentence>(php_sentence());
  ManyOneReduction red;
  red.name = "PIGEON[" + family.name + "]->HCS";
  red.f = [map](const BitString& r) { return encode_hcs_instance(pigeon_hcs_tuples(*map, r)); };
  red.g = [map, phi](const BitString& r, const BitString& z) {
    auto expansion = logic::herbrand_expand(*phi, pigeon_hcs_tuples(*map, r));
    if (z.size() != expansion.atoms.size()) return BitString{};
    const std::uint64_t rv = r.to_uint();
    std::vector<std::uint64_t> fx(rv + 1);
    for (std::uint64_t x = 0; x <= rv; ++x) fx[x] = map->apply(r, x);
    auto holds = [&](const std::string& rel, std::uint64_t i, std::uint64_t j) {
      auto key = logic::Formula::atom(rel, {unary_numeral(i), unary_numeral(j)}).to_string();
      auto it = expansion.atom_index.find(key);
      return it != expansion.atom_index.end() && z[it->second];
    };
    for (std::uint64_t u = 0; u <= rv; ++u)
      if (holds("Ge", fx[u], rv)) return encode_tuple({BitString::from_uint(u)});
    for (std::uint64_t a = 0; a <= rv; ++a)
      for (std::uint64_t b = a + 1; b <= rv; ++b)
        if (holds("Eq", fx[a], fx[b])) return encode_tuple({BitString::from_uint(a), BitString::from_uint(b)});
    return BitString{};
  };
  return red;
}

// ------------------------------------------------------------ padding

namespace {
// Budget that covers an inner run plus linear bookkeeping.
PolyBound with_overhead(const PolyBound& b, std::uint64_t extra_c, std::uint64_t extra_d) {
  return {b.c + extra_c, std::max<std::uint64_t>(b.k, 1), b.d + extra_d};
}
}  // namespace

TFNPProblem normalize_padding(const TFNPProblem& p) {
  TFNPProblem q;
  q.name = p.name + "^pad";
  q.bound = {p.bound.c, p.bound.k, p.bound.d + 1};
  auto inner = p;
  q.verifier = vm::make_native_machine(
      q.name, 2, with_overhead(p.verifier->budget(), 2, 8), [inner](std::span<const BitString> in, vm::StepMeter& meter) {
        const BitString& x = in[0];
        meter.tick(in[1].size() + 1);
        if (in[1].size() != inner.bound(x.size()) + 1) return false;
        auto y = unpad(in[1]);
        if (!y) return false;
        const BitString args[] = {x, *y};
        auto r = inner.verifier->run(args);
        meter.tick(r.steps);
        return r.accepted();
      });
  q.enumerate = [inner](const BitString& x) {
    std::vector<BitString> out;
    const std::size_t width = inner.bound(x.size()) + 1;
    for (const auto& y : all_witnesses(inner, x)) out.push_back(pad_to_width(y, width));
    std::sort(out.begin(), out.end());
    return out;
  };
  return q;
}

// ------------------------------------------------------------ NP relations

TFNPProblem flatten_np_relation(const NPMVFunction& r) {
  TFNPProblem q;
  q.name = r.name + "^flat";
  const auto& yb = r.ybound;
  const auto& zb = r.zbound;
  q.bound = {5 * (yb.c + zb.c), std::max(yb.k, zb.k), 5 * (yb.d + zb.d + yb.c + zb.c) + 8};
  auto rel = r;
  q.verifier = vm::make_native_machine(
      q.name, 2, with_overhead(r.relation->budget(), 4, 16), [rel](std::span<const BitString> in, vm::StepMeter& meter) {
        meter.tick(in[1].size() + 1);
        auto parts = decode_tuple(in[1], 2);
        if (!parts) return false;
        const std::size_t n = in[0].size();
        if ((*parts)[0].size() > rel.ybound(n) || (*parts)[1].size() > rel.zbound(n)) return false;
        const BitString args[] = {in[0], (*parts)[0], (*parts)[1]};
        auto res = rel.relation->run(args);
        meter.tick(res.steps);
        return res.accepted();
      });
  q.enumerate = [rel](const BitString& x) {
    const std::size_t n = x.size();
    const auto yb = rel.ybound(n), zb = rel.zbound(n);
    if (yb + zb > kSweepBits) throw ResourceLimit(rel.name + ": witness space too large to enumerate");
    std::vector<BitString> out;
    auto zs = strings_up_to(static_cast<std::size_t>(zb));
    for (const auto& y : strings_up_to(static_cast<std::size_t>(yb)))
      for (const auto& z : zs) {
        const BitString args[] = {x, y, z};
        if (rel.relation->run(args).accepted()) out.push_back(encode_tuple({y, z}));
      }
    std::sort(out.begin(), out.end());
    return out;
  };
  return q;
}

std::vector<BitString> npmv_values(const NPMVFunction& g, const BitString& x, std::size_t max_bits) {
  const std::size_t n = x.size();
  const auto yb = g.ybound(n), zb = g.zbound(n);
  if (yb + zb > max_bits) throw ResourceLimit(g.name + ": value set too large to enumerate");
  std::vector<BitString> out;
  auto zs = strings_up_to(static_cast<std::size_t>(zb));
  for (const auto& y : strings_up_to(static_cast<std::size_t>(yb)))
    for (const auto& z : zs) {
      const BitString args[] = {x, y, z};
      if (g.relation->run(args).accepted()) {
        out.push_back(y);
        break;
      }
    }
  return out;
}

NpmvReport check_npmv_reduction(const NPMVFunction& f, const NPMVFunction& g,
                                const std::function<BitString(const BitString&)>& h,
                                const std::vector<BitString>& domain) {
  NpmvReport rep;
  for (const auto& x : domain) {
    NpmvCase c;
    c.x = x;
    c.hx = h(x);
    c.f_values = npmv_values(f, x);
    c.g_values = npmv_values(g, c.hx);
    c.equal = c.f_values == c.g_values;
    rep.pass = rep.pass && c.equal;
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

NPMVFunction divisor_npmv() {
  return {"DIVISOR", vm::make_program_machine(programs::load("divisor_relation")), {1, 1, 0}, {0, 0, 0}};
}

NPMVFunction all_divisors_npmv() {
  return {"ALL-DIVISORS", vm::make_program_machine(programs::load("all_divisors")), {1, 1, 0}, {0, 0, 0}};
}

// ------------------------------------------------------------ completion

BitString completion_instance(const BitString& x, const circuit::Circuit& c) {
  return encode_tuple({x, BitString::from_bytes(c.to_text())});
}

namespace {

using circuit::Circuit;
using GK = circuit::Gate::Kind;

struct CompletionInstance {
  BitString x;
  Circuit c;
  std::vector<std::vector<circuit::Wire>> answers;  // per gate index of oracle gates
};

// nullopt when the instance does not have the required form.
std::optional<CompletionInstance> parse_completion(const BitString& u, const TFNPProblem& p) {
  auto parts = decode_tuple(u, 2);
  if (!parts) return std::nullopt;
  auto text = (*parts)[1].to_bytes();
  if (!text) return std::nullopt;
  CompletionInstance inst;
  inst.x = (*parts)[0];
  try {
    inst.c = Circuit::parse(*text);
  } catch (const InputError&) {
    return std::nullopt;
  }
  if (inst.c.input_width() != inst.x.size()) return std::nullopt;
  const auto& gates = inst.c.gates();
  inst.answers.assign(gates.size(), {});
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].kind == GK::Oracle) {
      if (gates[i].b != p.bound(gates[i].query.size()) + 1) return std::nullopt;
      inst.answers[i].assign(gates[i].b, static_cast<circuit::Wire>(-1));
    }
  }
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].kind != GK::Answer) continue;
    auto& slot = inst.answers[gates[i].a][gates[i].b];
    if (slot != static_cast<circuit::Wire>(-1)) return std::nullopt;
    slot = static_cast<circuit::Wire>(i);
  }
  for (std::size_t i = 0; i < gates.size(); ++i)
    for (auto w : inst.answers[i])
      if (w == static_cast<circuit::Wire>(-1)) return std::nullopt;
  return inst;
}

PolyBound completion_budget(const TFNPProblem& p) {
  auto sat = [](std::uint64_t a, std::uint64_t b) { return (b != 0 && a > (std::uint64_t{1} << 40) / b) ? (std::uint64_t{1} << 40) : a * b; };
  const auto vb = p.verifier->budget();
  const std::uint64_t K = std::max<std::uint64_t>(p.bound.k, 1);
  const std::uint64_t lin = 1 + p.bound.c + p.bound.d;
  std::uint64_t scale = 1;
  for (std::uint64_t i = 0; i < vb.k; ++i) scale = sat(scale, lin);
  return {sat(vb.c, scale) + vb.d + 64, K * vb.k + 1, 1024};
}

}  // namespace

TFNPProblem wrap_completion(const TFNPProblem& p) {
  TFNPProblem q;
  q.name = p.name + "'";
  q.bound = {1, 1, 0};
  auto inner = p;
  q.verifier = vm::make_native_machine(
      q.name, 2, completion_budget(p), [inner](std::span<const BitString> in, vm::StepMeter& meter) {
        meter.tick(in[0].size() + in[1].size() + 1);
        auto inst = parse_completion(in[0], inner);
        if (!inst) return true;  // malformed instances accept every v
        const auto& gates = inst->c.gates();
        const BitString& v = in[1];
        if (v.size() != gates.size()) return false;
        for (std::size_t i = 0; i < gates.size(); ++i) {
          const auto& g = gates[i];
          bool expect = v[i];
          switch (g.kind) {
            case GK::Input: expect = inst->x[g.a]; break;
            case GK::Const: expect = g.a != 0; break;
            case GK::Not: expect = !v[g.a]; break;
            case GK::And: expect = v[g.a] && v[g.b]; break;
            case GK::Or: expect = v[g.a] || v[g.b]; break;
            case GK::Oracle: expect = false; break;
            case GK::Answer: break;  // free; checked through its oracle gate
          }
          if (expect != v[i]) return false;
        }
        for (std::size_t i = 0; i < gates.size(); ++i) {
          if (gates[i].kind != GK::Oracle) continue;
          BitString q, a;
          for (auto w : gates[i].query) q.push_back(v[w]);
          for (auto w : inst->answers[i]) a.push_back(v[w]);
          auto y = unpad(a);
          if (!y) return false;
          const BitString args[] = {q, *y};
          if (y->size() > inner.bound(q.size())) return false;
          auto r = inner.verifier->run(args);
          meter.tick(r.steps);
          if (!r.accepted()) return false;
        }
        return true;
      });
  q.enumerate = [inner](const BitString& u) {
    auto inst = parse_completion(u, inner);
    if (!inst) return strings_up_to(u.size());
    const auto& gates = inst->c.gates();
    std::vector<BitString> out;
    std::vector<bool> val(gates.size(), false);
    // Depth-first over the witness choices of each oracle gate in order.
    std::function<void(std::size_t)> dfs = [&](std::size_t i) {
      for (; i < gates.size(); ++i) {
        const auto& g = gates[i];
        switch (g.kind) {
          case GK::Input: val[i] = inst->x[g.a]; break;
          case GK::Const: val[i] = g.a != 0; break;
          case GK::Not: val[i] = !val[g.a]; break;
          case GK::And: val[i] = val[g.a] && val[g.b]; break;
          case GK::Or: val[i] = val[g.a] || val[g.b]; break;
          case GK::Answer: break;  // already set by the oracle gate
          case GK::Oracle: {
            val[i] = false;
            BitString q;
            for (auto w : g.query) q.push_back(val[w]);
            for (const auto& y : all_witnesses(inner, q)) {
              BitString a = pad_to_width(y, g.b);
              for (std::size_t j = 0; j < g.b; ++j) val[inst->answers[i][j]] = a[j];
              dfs(i + 1);
            }
            return;
          }
        }
      }
      BitString v;
      for (bool b : val) v.push_back(b);
      out.push_back(std::move(v));
    };
    dfs(0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  return q;
}

BitString transcript(const circuit::Circuit& c, const BitString& x, const TFNPProblem& p, const Solver& solver) {
  auto run = circuit::eval_oracle_circuit(c, x, [&](const BitString& q) {
    return pad_to_width(solver(q), p.bound(q.size()) + 1);
  });
  BitString v;
  for (bool b : run.values) v.push_back(b);
  return v;
}

BitString run_turing(const TuringReduction& t, const BitString& x, const Solver& solver) {
  const BitString in[] = {x};
  return vm::run(t.program, in, solver).output;
}

circuit::Circuit turing_circuit(const TuringReduction& t, std::size_t n, std::size_t gate_cap) {
  vm::CompileOptions o;
  o.gate_cap = gate_cap;
  o.tape_output = true;
  o.tape_bound = t.source.bound(n);
  o.answer_bound = [b = t.oracle.bound](std::size_t q) { return static_cast<std::size_t>(b(q)); };
  return vm::compile_to_circuit(t.program, {vm::InputSpec::free(n)}, o).circuit;
}

ManyOneReduction turing_to_many_one(const TuringReduction& t, std::size_t gate_cap) {
  struct Cache {
    std::mutex mu;
    std::map<std::size_t, std::shared_ptr<const circuit::Circuit>> circuits;
  };
  auto cache = std::make_shared<Cache>();
  auto circuit_for = [cache, t, gate_cap](std::size_t n) {
    std::lock_guard lock(cache->mu);
    auto& slot = cache->circuits[n];
    if (!slot) slot = std::make_shared<const circuit::Circuit>(turing_circuit(t, n, gate_cap));
    return slot;
  };
  ManyOneReduction red;
  red.name = t.name + "->completion";
  red.f = [circuit_for](const BitString& x) { return completion_instance(x, *circuit_for(x.size())); };
  red.g = [circuit_for](const BitString& x, const BitString& v) {
    auto c = circuit_for(x.size());
    if (v.size() != c->size()) return BitString{};
    BitString out;
    for (auto w : c->outputs()) out.push_back(v[w]);
    auto y = unpad(out);
    return y ? *y : BitString{};
  };
  return red;
}

TuringReduction succ_once_reduction() {
  return {"succ_once", programs::load("succ_once"), succ_problem(), succ_problem()};
}
TuringReduction succ_twice_reduction() {
  return {"succ_twice", programs::load("succ_twice"), add_const_problem(2), succ_problem()};
}
TuringReduction succ_direct_reduction() {
  return {"succ_direct", programs::load("succ_direct"), succ_problem(), succ_problem()};
}
TuringReduction factoring_once_reduction() {
  return {"factoring_once", programs::load("factoring_once"), factoring_problem(), factoring_problem()};
}

// ------------------------------------------------------------ universal

std::string certificate(const std::string& name, const PolyBound& bound, const std::string& key) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : key + "|" + name + "|" + bound.to_string()) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 15];
  return out;
}

void Registry::admit(RegistryEntry e) {
  if (e.name.empty() || e.name.find('|') != std::string::npos) throw InputError("bad registry name '" + e.name + "'");
  if (find(e.name)) throw InputError("problem '" + e.name + "' registered twice");
  if (e.cert != certificate(e.name, e.problem.bound, key_))
    throw InputError("certificate for '" + e.name + "' does not validate");
  entries_.push_back(std::move(e));
}

bool Registry::valid(const std::string& name, const std::string& cert) const {
  const auto* e = find(name);
  return e && e->cert == cert;
}

const RegistryEntry* Registry::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

namespace {
std::vector<BitString> numbers_up_to(std::uint64_t hi) {
  std::vector<BitString> out;
  for (std::uint64_t v = 0; v <= hi; ++v) out.push_back(BitString::from_uint(v));
  return out;
}
}  // namespace

Registry default_registry() {
  Registry reg;
  auto add = [&](const std::string& name, TFNPProblem p, std::vector<BitString> domain) {
    auto cert = certificate(name, p.bound);
    reg.admit({name, std::move(p), cert, std::move(domain)});
  };
  add("FACTORING", factoring_problem(), numbers_up_to(64));
  add("SUCC", succ_problem(), strings_up_to(6));
  add("PLUS2", add_const_problem(2), strings_up_to(6));
  add("PIGEON-identity", pigeon_problem(pigeon_family_by_name("identity")), strings_up_to(4));
  add("PIGEON-mod2", pigeon_problem(pigeon_family_by_name("mod2")), strings_up_to(4));
  add("PIGEON-xor-r", pigeon_problem(pigeon_family_by_name("xor-r")), strings_up_to(4));
  {
    auto map = pigeon_map(pigeon_family_by_name("mod2"));
    std::vector<BitString> domain;
    for (std::uint64_t r = 0; r <= 3; ++r) domain.push_back(encode_hcs_instance(pigeon_hcs_tuples(*map, BitString::from_uint(r))));
    add("HCS-PHP", hcs_problem(php_sentence()), domain);
  }
  return reg;
}

TFNPProblem universal_problem(std::shared_ptr<const Registry> registry) {
  TFNPProblem u;
  u.name = "UNIVERSAL";
  u.bound = {1, 1, 0};
  PolyBound budget{8, 1, 64};
  for (const auto& e : registry->entries()) {
    const auto b = e.problem.verifier->budget();
    budget.c = std::max(budget.c, b.c << std::min<std::uint64_t>(b.k, 20));
    budget.k = std::max(budget.k, b.k);
    budget.d = std::max(budget.d, b.d + 64);
  }
  budget.c += 8;
  // nullopt when u is not a well-formed, certified instance.
  auto resolve = [registry](const BitString& x) -> std::optional<std::pair<const RegistryEntry*, BitString>> {
    auto parts = decode_tuple(x, 4);
    if (!parts) return std::nullopt;
    auto name = (*parts)[1].to_bytes();
    auto cert = (*parts)[2].to_bytes();
    if (!name || !cert || !registry->valid(*name, *cert)) return std::nullopt;
    const auto* e = registry->find(*name);
    const BitString& xp = (*parts)[0];
    if ((*parts)[3] != BitString::ones(e->problem.bound(xp.size()))) return std::nullopt;
    return std::make_pair(e, xp);
  };
  u.verifier = vm::make_native_machine(u.name, 2, budget, [resolve](std::span<const BitString> in, vm::StepMeter& meter) {
    meter.tick(in[0].size() + 1);
    auto r = resolve(in[0]);
    if (!r) return true;  // one can take any v, in particular v = 0
    const auto& [e, xp] = *r;
    if (in[1].size() > e->problem.bound(xp.size())) return false;
    const BitString args[] = {xp, in[1]};
    auto res = e->problem.verifier->run(args);
    meter.tick(res.steps);
    return res.accepted();
  });
  u.enumerate = [resolve](const BitString& x) {
    auto r = resolve(x);
    if (!r) return strings_up_to(x.size());
    return all_witnesses(r->first->problem, r->second);
  };
  return u;
}

BitString embed(const Registry& registry, const std::string& name, const BitString& x) {
  const auto* e = registry.find(name);
  if (!e) throw InputError("problem '" + name + "' is not registered");
  return encode_tuple({x, BitString::from_bytes(name), BitString::from_bytes(e->cert),
                       BitString::ones(e->problem.bound(x.size()))});
}

ManyOneReduction embed_reduction(std::shared_ptr<const Registry> registry, const std::string& name) {
  if (!registry->find(name)) throw InputError("problem '" + name + "' is not registered");
  ManyOneReduction red;
  red.name = "embed[" + name + "]";
  red.f = [registry, name](const BitString& x) { return embed(*registry, name, x); };
  const auto b = registry->find(name)->problem.bound;
  // Valid witnesses are at most b(|x|) long, so g may truncate there.
  red.g = [b](const BitString& x, const BitString& z) { return z.slice(0, std::min<std::size_t>(z.size(), b(x.size()))); };
  red.g_program = vm::Program::assemble(programs::truncate_source("truncate", b.c, b.k, b.d));
  return red;
}

}  // namespace tfnp::core
