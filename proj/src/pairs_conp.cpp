#include "tfnp/pairs.hpp"

#include "tfnp/error.hpp"
#include "tfnp/paircode.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>

namespace tfnp::pairs {

using circuit::Circuit;

bool conp_member(const DisjointCoNPPair& pair, int member, const BitString& x, std::size_t max_bits) {
  if (pair.decide) return pair.decide(x, member);
  const auto b = pair.bound[member](x.size());
  if (b > max_bits) throw ResourceLimit(pair.name + ": universal quantifier too wide to sweep");
  BitString y;
  for (;;) {
    if (!pair.beta[member](x, y)) return false;
    y = next_length_lex(y);
    if (y.size() > b) return true;
  }
}

BitString conp_instance(const BitString& x, const Circuit& c) { return core::completion_instance(x, c); }

namespace {

struct ConpInstance {
  BitString x;
  Circuit c;
};

// nullopt unless C is oracle free, has one output and `width(|x|)` inputs.
std::optional<ConpInstance> parse_conp(const BitString& u, const std::function<std::uint64_t(std::size_t)>& width) {
  auto parts = decode_tuple(u, 2);
  if (!parts) return std::nullopt;
  auto text = (*parts)[1].to_bytes();
  if (!text) return std::nullopt;
  ConpInstance inst{(*parts)[0], {}};
  try {
    inst.c = Circuit::parse(*text);
  } catch (const InputError&) {
    return std::nullopt;
  }
  if (inst.c.has_oracle() || inst.c.outputs().size() != 1 || inst.c.input_width() != width(inst.x.size()))
    return std::nullopt;
  return inst;
}

// C(y) for every y, 64 at a time.
std::vector<bool> eval_all(const Circuit& c, const std::vector<BitString>& ys) {
  std::vector<bool> out;
  out.reserve(ys.size());
  for (std::size_t base = 0; base < ys.size(); base += 64) {
    const std::size_t n = std::min<std::size_t>(64, ys.size() - base);
    std::vector<std::uint64_t> lanes(c.input_width(), 0);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < c.input_width(); ++i)
        if (ys[base + l][i]) lanes[i] |= std::uint64_t{1} << l;
    auto res = circuit::eval_lanes(c, lanes);
    for (std::size_t l = 0; l < n; ++l) out.push_back((res[0] >> l) & 1);
  }
  return out;
}

}  // namespace

DisjointCoNPPair canonical_conp_pair(const TFNPProblem& padded) {
  DisjointCoNPPair pair;
  pair.name = "A(" + padded.name + ")";
  pair.bound = {padded.bound, padded.bound};
  auto width = [b = padded.bound](std::size_t n) { return b(n); };
  for (int i = 0; i < 2; ++i)
    pair.beta[i] = [padded, width, i](const BitString& u, const BitString& y) {
      auto inst = parse_conp(u, width);
      if (!inst) return false;
      if (!core::verify_solution(padded, inst->x, y)) return true;
      return circuit::eval(inst->c, y)[0] == (i == 1);
    };
  pair.decide = [padded, width](const BitString& u, int member) {
    auto inst = parse_conp(u, width);
    if (!inst) return false;
    auto ys = core::all_witnesses(padded, inst->x);
    for (bool v : eval_all(inst->c, ys))
      if (v != (member == 1)) return false;
    return true;
  };
  return pair;
}

Membership conp_membership(const DisjointCoNPPair& pair, const BitString& x) {
  const bool a0 = conp_member(pair, 0, x), a1 = conp_member(pair, 1, x);
  return a0 && a1 ? Membership::Both : a0 ? Membership::A0 : a1 ? Membership::A1 : Membership::Neither;
}

DisjointCoNPPair parity_conp_pair() {
  DisjointCoNPPair p;
  p.name = "EVEN/ODD";
  p.bound = {PolyBound{0, 0, 0}, PolyBound{0, 0, 0}};
  auto even = [](const BitString& x) { return x.empty() || !x[x.size() - 1]; };
  p.beta[0] = [even](const BitString& x, const BitString&) { return even(x); };
  p.beta[1] = [even](const BitString& x, const BitString&) { return !even(x); };
  return p;
}

ConpCanonicalization conp_pair_to_canonical(const DisjointCoNPPair& b) {
  const auto& r0 = b.bound[0];
  const auto& r1 = b.bound[1];
  // p(n) >= max(r0(n), r1(n)) + 2 for every n, including n = 0.
  const PolyBound p{r0.c + r1.c, std::max(r0.k, r1.k), r0.d + r1.d + r0.c + r1.c + 2};
  ConpCanonicalization out;
  TFNPProblem& q = out.problem;
  q.name = "COUNTEREXAMPLE(" + b.name + ")";
  q.bound = p;
  q.verifier = vm::make_native_machine(
      q.name, 2, PolyBound{64, std::max<std::uint64_t>(p.k, 1), 1024},
      [b, p](std::span<const BitString> in, vm::StepMeter& meter) {
        const BitString& x = in[0];
        const BitString& z = in[1];
        meter.tick(z.size() + 1);
        if (z.size() != p(x.size())) return false;
        const int i = z[0] ? 1 : 0;
        auto y = unpad(z.slice(1, z.size() - 1));
        if (!y || y->size() > b.bound[i](x.size())) return false;
        return !b.beta[i](x, *y);
      });
  q.enumerate = [b, p](const BitString& x) {
    std::vector<BitString> out;
    const std::size_t w = p(x.size()) - 1;
    for (int i = 0; i < 2; ++i) {
      const auto bi = b.bound[i](x.size());
      if (bi > core::kSweepBits) throw ResourceLimit(b.name + ": universal quantifier too wide to sweep");
      for (const auto& y : core::strings_up_to(bi)) {
        if (b.beta[i](x, y)) continue;
        BitString z{i};
        z.append(pad_to_width(y, w));
        out.push_back(std::move(z));
      }
    }
    if (out.empty()) throw TotalityViolation(b.name + ": instance lies in both members");
    std::sort(out.begin(), out.end());
    return out;
  };
  out.circuit = [p](std::size_t n) {
    circuit::Builder bld;
    auto w = bld.lnot(bld.input(0));
    return bld.finish({w}, p(n));
  };
  out.reduction = {"to-canonical[" + b.name + "]",
                   [c = out.circuit](const BitString& x) { return conp_instance(x, c(x.size())); }};
  return out;
}

ConpReductionReport check_conp_pair_reduction(const PairReduction& red, const DisjointCoNPPair& source,
                                              const DisjointCoNPPair& target, const std::vector<BitString>& domain) {
  ConpReductionReport rep;
  for (const auto& x : domain) {
    for (int j = 0; j < 2; ++j) {
      if (!conp_member(source, j, x)) continue;
      ++rep.checked;
      if (!conp_member(target, j, red.f(x))) {
        rep.pass = false;
        if (!rep.counterexample) rep.counterexample = x;
      }
    }
  }
  return rep;
}

PairReduction lift_tfnp_reduction_to_conp_pairs(const core::ManyOneReduction& red, const TFNPProblem& p,
                                                const TFNPProblem& q, std::size_t gate_cap) {
  if (!red.g_program) throw InputError(red.name + ": no bytecode for g, cannot lift");
  if (red.g_program->uses_oracle()) throw InputError(red.name + ": g must not use an oracle");
  struct Cache {
    std::mutex mu;
    std::map<BitString, std::shared_ptr<const Circuit>> g;
  };
  auto cache = std::make_shared<Cache>();
  auto program = *red.g_program;
  auto f = red.f;
  const PolyBound pb = p.bound, qb = q.bound;
  // G_x maps a padded Q witness of f(x) to the padded g(x, .).
  auto g_circuit = [cache, program, pb, qb, gate_cap](const BitString& x, const BitString& fx) {
    std::lock_guard lock(cache->mu);
    auto& slot = cache->g[x];
    if (!slot) {
      vm::CompileOptions o;
      o.gate_cap = gate_cap;
      o.tape_output = true;
      o.tape_bound = pb(x.size());
      auto res = vm::compile_to_circuit(program, {vm::InputSpec::fixed(x), vm::InputSpec::padded(qb(fx.size()))}, o);
      slot = std::make_shared<const Circuit>(std::move(res.circuit));
    }
    return slot;
  };
  PairReduction out;
  out.name = "lift[" + red.name + "]";
  out.f = [f, pb, g_circuit](const BitString& u) {
    auto inst = parse_conp(u, [pb](std::size_t n) { return pb(n) + 1; });
    if (!inst) return BitString{0};
    const BitString fx = f(inst->x);
    auto g = g_circuit(inst->x, fx);
    return conp_instance(fx, circuit::compose(inst->c, *g));
  };
  return out;
}

std::vector<Circuit> conp_circuit_battery(std::size_t width, std::uint64_t seed) {
  if (width == 0) throw InputError("circuit battery needs at least one input");
  std::vector<Circuit> out;
  auto make = [&](auto&& body) {
    circuit::Builder b;
    auto w = body(b);
    out.push_back(b.finish({w}, width));
  };
  make([](circuit::Builder& b) { return b.constant(false); });
  make([](circuit::Builder& b) { return b.constant(true); });
  std::vector<std::size_t> probes{0, 1, width / 2, width - 1};
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  for (auto k : probes)
    if (k < width) make([k](circuit::Builder& b) { return b.input(k); });
  const std::size_t six = std::min<std::size_t>(6, width);
  make([six](circuit::Builder& b) {
    auto w = b.input(0);
    for (std::size_t i = 1; i < six; ++i) w = b.lxor(w, b.input(i));
    return w;
  });
  make([six, width](circuit::Builder& b) {
    auto w = b.input(width - 1);
    for (std::size_t i = 1; i < six; ++i) w = b.land(w, b.input(width - 1 - i));
    return w;
  });
  make([six, width](circuit::Builder& b) {
    auto w = b.input(0);
    for (std::size_t i = 1; i < six; ++i) w = b.lor(w, b.input(i * (width - 1) / std::max<std::size_t>(six - 1, 1)));
    return w;
  });
  std::mt19937_64 rng(seed);
  for (int r = 0; r < 3; ++r) {
    std::vector<std::size_t> picks;
    for (std::size_t i = 0; i < six; ++i) picks.push_back(rng() % width);
    std::vector<std::uint64_t> ops;
    for (int g = 0; g < 12; ++g) ops.push_back(rng());
    make([&](circuit::Builder& b) {
      std::vector<circuit::Wire> pool;
      for (auto k : picks) pool.push_back(b.input(k));
      for (auto op : ops) {
        auto a = pool[op % pool.size()];
        auto c = pool[(op >> 8) % pool.size()];
        switch ((op >> 16) % 4) {
          case 0: pool.push_back(b.land(a, c)); break;
          case 1: pool.push_back(b.lor(a, c)); break;
          case 2: pool.push_back(b.lxor(a, c)); break;
          default: pool.push_back(b.lnot(a)); break;
        }
      }
      return pool.back();
    });
  }
  return out;
}

}  // namespace tfnp::pairs
