#include "tfnp/pairs.hpp"

#include "tfnp/bits.hpp"
#include "tfnp/error.hpp"

#include <cstdlib>

namespace tfnp::pairs {

using circuit::Wire;
using GK = circuit::Gate::Kind;

bool is_composite(std::uint64_t n) {
  if (n < 4) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return true;
  return false;
}

namespace {

// Circuit on inputs a0 b0 a1 b1 ... (MSB first), then n (MSB first).
circuit::Circuit gamma_circuit(std::size_t w) {
  circuit::Builder b;
  std::vector<Wire> a(w), bb(w), n(w);  // index 0 = least significant
  for (std::size_t i = 0; i < w; ++i) {
    a[w - 1 - i] = b.input(2 * i);
    bb[w - 1 - i] = b.input(2 * i + 1);
  }
  for (std::size_t i = 0; i < w; ++i) n[w - 1 - i] = b.input(2 * w + i);
  auto at_least_two = [&](const std::vector<Wire>& v) {
    Wire r = b.constant(false);
    for (std::size_t i = 1; i < w; ++i) r = b.lor(r, v[i]);
    return r;
  };
  // Shift-and-add product of width 2w.
  std::vector<Wire> prod(2 * w, b.constant(false));
  for (std::size_t j = 0; j < w; ++j) {
    Wire carry = b.constant(false);
    for (std::size_t i = 0; i + j < 2 * w; ++i) {
      Wire add = i < w ? b.land(a[i], bb[j]) : b.constant(false);
      Wire s = b.lxor(b.lxor(prod[i + j], add), carry);
      carry = b.lor(b.land(prod[i + j], add), b.land(carry, b.lxor(prod[i + j], add)));
      prod[i + j] = s;
    }
  }
  Wire eq = b.constant(true);
  for (std::size_t k = 0; k < 2 * w; ++k) {
    Wire target = k < w ? n[k] : b.constant(false);
    eq = b.land(eq, b.lnot(b.lxor(prod[k], target)));
  }
  Wire out = b.land(b.land(at_least_two(a), at_least_two(bb)), eq);
  return b.finish({out}, 3 * w);
}

}  // namespace

Cnf gamma_cnf(std::uint64_t n) {
  const std::size_t w = std::max<std::size_t>(1, bit_length(n));
  const auto c = gamma_circuit(w);
  Cnf cnf;
  std::vector<int> var(c.size());
  int next = static_cast<int>(3 * w);
  for (std::size_t g = 0; g < c.size(); ++g) {
    const auto& gate = c.gates()[g];
    if (gate.kind == GK::Input) {
      var[g] = static_cast<int>(gate.a) + 1;
      continue;
    }
    const int x = var[g] = ++next;
    const int l = gate.kind == GK::Const ? 0 : var[gate.a];
    const int r = (gate.kind == GK::And || gate.kind == GK::Or) ? var[gate.b] : 0;
    switch (gate.kind) {
      case GK::Const: cnf.clauses.push_back({gate.a ? x : -x}); break;
      case GK::Not:
        cnf.clauses.push_back({x, l});
        cnf.clauses.push_back({-x, -l});
        break;
      case GK::And:
        cnf.clauses.push_back({-x, l});
        cnf.clauses.push_back({-x, r});
        cnf.clauses.push_back({x, -l, -r});
        break;
      case GK::Or:
        cnf.clauses.push_back({x, -l});
        cnf.clauses.push_back({x, -r});
        cnf.clauses.push_back({-x, l, r});
        break;
      default: throw std::logic_error("unexpected gate in the product circuit");
    }
  }
  cnf.clauses.push_back({var[c.outputs()[0]]});
  for (std::size_t i = 0; i < w; ++i) {
    const int v = static_cast<int>(2 * w + i + 1);
    cnf.clauses.push_back({((n >> (w - 1 - i)) & 1) ? v : -v});
  }
  cnf.num_vars = static_cast<std::size_t>(next);
  return cnf;
}

PropFormula gamma_formula(std::uint64_t n) { return prop::cnf_to_formula(gamma_cnf(n)); }

std::optional<std::uint64_t> gamma_parameter(const PropFormula& phi) {
  using K = PropFormula::Kind;
  if (phi.kind != K::And) return std::nullopt;
  const auto& ch = phi.children;
  auto literal = [](const PropFormula& f) -> int {
    if (f.kind == K::Var) return static_cast<int>(f.var);
    if (f.kind == K::Not && f.children.size() == 1 && f.children[0].kind == K::Var)
      return -static_cast<int>(f.children[0].var);
    return 0;
  };
  std::size_t trailing = 0;
  while (trailing < ch.size() && literal(ch[ch.size() - 1 - trailing]) != 0) ++trailing;
  for (std::size_t w = 1; w <= std::min<std::size_t>(trailing, 63); ++w) {
    std::uint64_t n = 0;
    bool shaped = true;
    for (std::size_t i = 0; i < w && shaped; ++i) {
      const int l = literal(ch[ch.size() - w + i]);
      shaped = static_cast<std::size_t>(std::abs(l)) == 2 * w + i + 1;
      n = (n << 1) | (l > 0 ? 1u : 0u);
    }
    if (!shaped || std::max<std::size_t>(1, bit_length(n)) != w) continue;
    if (gamma_formula(n) == phi) return n;
  }
  return std::nullopt;
}

namespace {

const PropFormula& x1() {
  static const PropFormula f = PropFormula::variable(1);
  return f;
}

std::optional<PropFormula> standard_check(const std::string& proof) {
  if (proof.rfind("SAT:", 0) != 0) return std::nullopt;
  auto rest = proof.substr(4);
  auto colon = rest.find(':');
  if (colon == std::string::npos) return std::nullopt;
  try {
    auto phi = prop::parse_formula(rest.substr(0, colon));
    auto bits = rest.substr(colon + 1);
    if (bits.size() != phi.max_var() || bits.find_first_not_of("01") != std::string::npos) return std::nullopt;
    prop::Assignment a(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) a.set(static_cast<std::uint32_t>(i + 1), bits[i] == '1');
    if (prop::evaluate(phi, a)) return phi;
  } catch (const InputError&) {
  }
  return std::nullopt;
}

}  // namespace

ProofSystem standard_sat_system() {
  ProofSystem p;
  p.name = "SAT-standard";
  p.domain = ProofSystem::Domain::Sat;
  p.default_statement = x1();
  p.check = [](const std::string& proof) { return standard_check(proof).value_or(x1()); };
  return p;
}

ProofSystem composite_sat_system() {
  ProofSystem p;
  p.name = "SAT-composite";
  p.domain = ProofSystem::Domain::Sat;
  p.default_statement = x1();
  p.check = [](const std::string& proof) {
    if (auto phi = standard_check(proof)) return *phi;
    try {
      auto phi = prop::parse_formula(proof);
      auto n = gamma_parameter(phi);
      if (n && is_composite(*n)) return phi;
    } catch (const InputError&) {
    }
    return x1();
  };
  return p;
}

}  // namespace tfnp::pairs
