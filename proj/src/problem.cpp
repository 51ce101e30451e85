#include "tfnp/problem.hpp"

#include "tfnp/error.hpp"
#include "tfnp/paircode.hpp"
#include "tfnp/programs.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace tfnp::core {

bool verify_solution(const TFNPProblem& p, const BitString& x, const BitString& y) {
  if (y.size() > p.bound(x.size())) return false;
  const BitString in[] = {x, y};
  return p.verifier->run(in).accepted();
}

std::vector<BitString> strings_up_to(std::size_t n) {
  if (n > 24) throw ResourceLimit("refusing to list all strings of up to " + std::to_string(n) + " bits");
  std::vector<BitString> out;
  out.reserve((std::size_t{2} << n) - 1);
  for (std::size_t len = 0; len <= n; ++len)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) out.push_back(BitString::from_uint(v, len));
  return out;
}

BitString solve_brute(const TFNPProblem& p, const BitString& x, std::size_t max_bits) {
  const std::uint64_t bound = p.bound(x.size());
  if (bound <= max_bits) {
    BitString y;
    const std::size_t top = static_cast<std::size_t>(bound);
    while (y.size() <= top) {
      if (verify_solution(p, x, y)) return y;
      y = next_length_lex(y);
    }
    throw TotalityViolation(p.name + ": no witness for instance " + x.to_hex());
  }
  if (!p.enumerate)
    throw ResourceLimit(p.name + ": SEARCH_SPACE_TOO_LARGE, witness bound " + std::to_string(bound) + " bits");
  auto ws = p.enumerate(x);
  if (ws.empty()) throw TotalityViolation(p.name + ": no witness for instance " + x.to_hex());
  return *std::min_element(ws.begin(), ws.end());
}

std::vector<BitString> all_witnesses(const TFNPProblem& p, const BitString& x, std::size_t max_bits) {
  if (p.enumerate) {
    auto ws = p.enumerate(x);
    std::sort(ws.begin(), ws.end());
    return ws;
  }
  const std::uint64_t bound = p.bound(x.size());
  if (bound > max_bits)
    throw ResourceLimit(p.name + ": SEARCH_SPACE_TOO_LARGE, witness bound " + std::to_string(bound) + " bits");
  std::vector<BitString> out;
  for (auto& y : strings_up_to(static_cast<std::size_t>(bound)))
    if (verify_solution(p, x, y)) out.push_back(std::move(y));
  return out;
}

// ------------------------------------------------------------ FACTORING

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Every string of length lo..hi whose value is v.
void representations(std::uint64_t v, std::size_t lo, std::size_t hi, std::vector<BitString>& out) {
  for (std::size_t len = std::max(lo, bit_length(v)); len <= hi; ++len) out.push_back(BitString::from_uint(v, len));
}

}  // namespace

TFNPProblem factoring_problem() {
  TFNPProblem p;
  p.name = "FACTORING";
  p.bound = {1, 1, 0};
  p.verifier = vm::make_program_machine(programs::load("factoring"));
  p.enumerate = [](const BitString& x) {
    const std::size_t n = x.size();
    std::vector<BitString> out;
    if (n > 30) throw ResourceLimit("FACTORING enumerator handles |N| <= 30");
    const std::uint64_t N = x.to_uint();
    if (N < 2 || is_prime(N)) {
      out = strings_up_to(n);
    } else {
      for (std::uint64_t d = 2; d < N; ++d)
        if (N % d == 0) representations(d, 0, n, out);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return p;
}

TFNPProblem add_const_problem(std::uint32_t k) {
  TFNPProblem p;
  p.name = k == 1 ? "SUCC" : "PLUS" + std::to_string(k);
  p.bound = {1, 1, 0};
  p.verifier = vm::make_program_machine(vm::Program::assemble(programs::add_const_source(k == 1 ? "succ" : "plus" + std::to_string(k), k)));
  p.enumerate = [k](const BitString& x) {
    const std::size_t n = x.size();
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v = (v << 1) | (x[i] ? 1u : 0u);
    std::uint64_t y = v + k;
    return std::vector<BitString>{BitString::from_uint(n >= 64 ? y : y & ((std::uint64_t{1} << n) - 1), n)};
  };
  return p;
}

// ------------------------------------------------------------ PIGEON

PigeonMap::PigeonMap(PigeonFamily family) : family_(std::move(family)) {}

const circuit::Circuit& PigeonMap::at(std::size_t n) const {
  std::lock_guard lock(mu_);
  if (cache_.size() <= n) cache_.resize(n + 1);
  if (!cache_[n]) {
    auto c = std::make_unique<circuit::Circuit>(family_.make(n));
    if (c->input_width() != 2 * n || c->outputs().size() != n || c->has_oracle())
      throw InputError("pigeon family '" + family_.name + "' produced a circuit of the wrong shape at n=" + std::to_string(n));
    cache_[n] = std::move(c);
  }
  return *cache_[n];
}

std::uint64_t PigeonMap::apply(const BitString& r, std::uint64_t x) const {
  const std::size_t n = r.size();
  BitString in = r;
  in.append(BitString::from_uint(x, n));
  return circuit::eval(at(n), in).to_uint();
}

namespace {

using circuit::Circuit;
using circuit::Gate;
using circuit::Wire;
using GK = circuit::Gate::Kind;

// Builds a family member from per-output wire constructors.
Circuit build_map(std::size_t n, const std::function<std::vector<Wire>(circuit::Builder&, const std::vector<Wire>& r,
                                                                       const std::vector<Wire>& x)>& body) {
  circuit::Builder b;
  std::vector<Wire> r, x;
  for (std::size_t i = 0; i < n; ++i) r.push_back(b.input(i));
  for (std::size_t i = 0; i < n; ++i) x.push_back(b.input(n + i));
  auto outs = body(b, r, x);
  return b.finish(outs, 2 * n);
}

Circuit random_map(std::size_t n, std::uint64_t seed) {
  Circuit c;
  for (std::size_t i = 0; i < 2 * n; ++i) c.add({GK::Input, static_cast<std::uint32_t>(i), 0, {}});
  if (n == 0) {
    c.set_outputs({});
    return c;
  }
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + n);
  const std::size_t extra = 3 * n + 4;
  for (std::size_t i = 0; i < extra; ++i) {
    auto pick = [&] { return static_cast<Wire>(rng() % c.size()); };
    switch (rng() % 3) {
      case 0: c.add({GK::Not, pick(), 0, {}}); break;
      case 1: { auto a = pick(); c.add({GK::And, a, pick(), {}}); break; }
      default: { auto a = pick(); c.add({GK::Or, a, pick(), {}}); break; }
    }
  }
  std::vector<Wire> outs;
  for (std::size_t i = 0; i < n; ++i) outs.push_back(static_cast<Wire>(c.size() - n + i));
  c.set_outputs(outs);
  return c;
}

}  // namespace

PigeonFamily pigeon_family_by_name(const std::string& name, std::uint64_t seed) {
  using V = std::vector<Wire>;
  if (name == "identity")
    return {name, [](std::size_t n) { return build_map(n, [](auto&, const V&, const V& x) { return x; }); }};
  if (name == "const0")
    return {name, [](std::size_t n) {
              return build_map(n, [n](auto& b, const V&, const V&) { return V(n, b.constant(false)); });
            }};
  if (name == "mod2")
    return {name, [](std::size_t n) {
              return build_map(n, [n](auto& b, const V&, const V& x) {
                V out(n, b.constant(false));
                if (n) out[n - 1] = x[n - 1];
                return out;
              });
            }};
  if (name == "half")
    return {name, [](std::size_t n) {
              return build_map(n, [n](auto& b, const V&, const V& x) {
                V out(n, b.constant(false));
                for (std::size_t i = 1; i < n; ++i) out[i] = x[i - 1];
                return out;
              });
            }};
  if (name == "xor-r")
    return {name, [](std::size_t n) {
              return build_map(n, [n](auto& b, const V& r, const V& x) {
                V out(n);
                for (std::size_t i = 0; i < n; ++i) out[i] = b.lxor(r[i], x[i]);
                return out;
              });
            }};
  if (name == "increment")
    return {name, [](std::size_t n) {
              return build_map(n, [n](auto& b, const V&, const V& x) {
                V out(n);
                Wire carry = b.constant(true);
                for (std::size_t i = n; i-- > 0;) {
                  out[i] = b.lxor(x[i], carry);
                  carry = b.land(x[i], carry);
                }
                return out;
              });
            }};
  if (name == "complement")
    return {name, [](std::size_t n) {
              return build_map(n, [n](auto& b, const V&, const V& x) {
                V out(n);
                for (std::size_t i = 0; i < n; ++i) out[i] = b.lnot(x[i]);
                return out;
              });
            }};
  if (name.rfind("random", 0) == 0) {
    std::uint64_t s = seed;
    if (name.size() > 6) {
      try {
        s = std::stoull(name.substr(6));
      } catch (const std::exception&) {
        throw InputError("bad random family name '" + name + "'");
      }
    }
    return {"random" + std::to_string(s), [s](std::size_t n) { return random_map(n, s); }};
  }
  throw InputError("unknown pigeon family '" + name + "'");
}

std::vector<PigeonFamily> pigeon_battery(std::uint64_t seed, std::size_t random_count) {
  std::vector<PigeonFamily> out;
  for (const char* n : {"identity", "const0", "mod2", "half", "xor-r", "increment", "complement"})
    out.push_back(pigeon_family_by_name(n));
  for (std::size_t i = 0; i < random_count; ++i)
    out.push_back(pigeon_family_by_name("random" + std::to_string(seed * 1000 + i + 1)));
  return out;
}

std::shared_ptr<const PigeonMap> pigeon_map(const PigeonFamily& family) {
  return std::make_shared<const PigeonMap>(family);
}

TFNPProblem pigeon_problem(const PigeonFamily& family) {
  auto map = pigeon_map(family);
  TFNPProblem p;
  p.name = "PIGEON[" + family.name + "]";
  p.bound = {6, 1, 8};
  p.verifier = vm::make_native_machine(
      p.name, 2, {64, 2, 4096}, [map](std::span<const BitString> in, vm::StepMeter& meter) {
        const BitString& r = in[0];
        const BitString& u = in[1];
        const std::size_t n = r.size();
        meter.tick(u.size() + 1);
        const auto& c = map->at(n);
        const std::uint64_t rv = r.to_uint();
        auto number = [&](const BitString& s) -> std::optional<std::uint64_t> {
          if (!s.is_canonical_number() || s.size() > n) return std::nullopt;
          std::uint64_t v = s.to_uint();
          if (v > rv) return std::nullopt;
          return v;
        };
        auto f = [&](std::uint64_t v) {
          meter.tick(c.size());
          return map->apply(r, v);
        };
        if (auto one = decode_tuple(u, 1)) {
          auto a = number((*one)[0]);
          return a && f(*a) >= rv;
        }
        if (auto two = decode_tuple(u, 2)) {
          auto a = number((*two)[0]);
          auto b = number((*two)[1]);
          return a && b && *a != *b && f(*a) == f(*b);
        }
        return false;
      });
  p.enumerate = [map](const BitString& r) {
    const std::uint64_t rv = r.to_uint();
    if (rv > (1u << 12)) throw ResourceLimit("PIGEON enumerator handles r <= 4096");
    std::vector<std::uint64_t> fx(rv + 1);
    for (std::uint64_t x = 0; x <= rv; ++x) fx[x] = map->apply(r, x);
    std::vector<BitString> out;
    for (std::uint64_t x = 0; x <= rv; ++x)
      if (fx[x] >= rv) out.push_back(encode_tuple({BitString::from_uint(x)}));
    std::map<std::uint64_t, std::vector<std::uint64_t>> buckets;
    for (std::uint64_t x = 0; x <= rv; ++x) buckets[fx[x]].push_back(x);
    std::size_t pairs = 0;
    for (const auto& [v, xs] : buckets) pairs += xs.size() * (xs.size() - 1);
    if (pairs > 2'000'000) throw ResourceLimit("PIGEON enumerator: too many collisions to list");
    for (const auto& [v, xs] : buckets)
      for (auto a : xs)
        for (auto b : xs)
          if (a != b) out.push_back(encode_tuple({BitString::from_uint(a), BitString::from_uint(b)}));
    std::sort(out.begin(), out.end());
    return out;
  };
  return p;
}

// ------------------------------------------------------------ HCS

BitString encode_hcs_instance(const std::vector<std::vector<logic::Term>>& tuples) {
  std::string text;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    if (i) text += ";";
    for (std::size_t j = 0; j < tuples[i].size(); ++j) {
      if (j) text += ",";
      text += tuples[i][j].to_string();
    }
  }
  return BitString::from_bytes(text);
}

std::vector<std::vector<logic::Term>> decode_hcs_instance(const logic::UniversalSentence& phi, const BitString& x) {
  std::vector<std::vector<logic::Term>> tuples;
  auto bytes = x.to_bytes();
  if (!bytes || bytes->empty()) return tuples;
  const std::string& text = *bytes;
  const std::size_t k = phi.variables.size();
  try {
    std::vector<logic::Term> cur;
    int depth = 0;
    std::size_t start = 0;
    auto flush_term = [&](std::size_t end) {
      cur.push_back(logic::parse_ground_term(std::string_view(text).substr(start, end - start), phi.signature));
      start = end + 1;
    };
    for (std::size_t i = 0; i <= text.size(); ++i) {
      char ch = i < text.size() ? text[i] : ';';
      if (ch == '(') ++depth;
      else if (ch == ')') --depth;
      else if (depth == 0 && (ch == ',' || ch == ';')) {
        flush_term(i);
        if (ch == ';') {
          if (cur.size() != k) return {};
          tuples.push_back(std::move(cur));
          cur.clear();
        }
      }
      if (depth < 0) return {};
    }
  } catch (const InputError&) {
    return {};
  }
  return tuples;
}

namespace {
std::size_t atom_occurrences(const logic::Formula& f) {
  std::vector<const logic::Formula*> atoms;
  f.collect_atoms(atoms);
  return atoms.size();
}
}  // namespace

TFNPProblem hcs_problem(const logic::UniversalSentence& phi) {
  auto shared = std::make_shared<const logic::UniversalSentence>(phi);
  const std::uint64_t a = std::max<std::size_t>(1, atom_occurrences(phi.matrix));
  TFNPProblem p;
  p.name = "HCS";
  p.bound = {a, 1, 0};
  const std::uint64_t weight = 16 * (phi.matrix.size() + 1);
  p.verifier = vm::make_native_machine(
      p.name, 2, {weight, 2, 1024}, [shared](std::span<const BitString> in, vm::StepMeter& meter) {
        meter.tick(in[0].size() + in[1].size() + 1);
        auto tuples = decode_hcs_instance(*shared, in[0]);
        auto g = logic::herbrand_expand(*shared, tuples);
        std::size_t work = 0;
        for (const auto& inst : g.instances) work += inst.size();
        meter.tick(work);
        if (in[1].size() != g.atoms.size()) return false;
        std::vector<bool> bits(g.atoms.size());
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = in[1][i];
        return g.evaluate(bits);
      });
  p.enumerate = [shared](const BitString& x) {
    auto g = logic::herbrand_expand(*shared, decode_hcs_instance(*shared, x));
    auto ts = prop::tseitin(g.propositional);
    auto models = prop::sat_enumerate(ts.cnf, g.atoms.size(), 1u << 16);
    std::vector<BitString> out;
    for (const auto& m : models) {
      BitString y;
      for (std::size_t i = 1; i <= g.atoms.size(); ++i) y.push_back(m[static_cast<std::uint32_t>(i)]);
      out.push_back(std::move(y));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return p;
}

logic::Term unary_numeral(std::uint64_t k) {
  logic::Term t = logic::Term::app("o");
  for (std::uint64_t i = 0; i < k; ++i) t = logic::Term::app("s", {std::move(t)});
  return t;
}

logic::UniversalSentence php_sentence() {
  return logic::parse_sentence_file(R"(functions: o/0 s/1
relations: Eq/2 Ge/2
forall x,y. Eq(o,o) & ~Eq(s(x),o) & ~Eq(o,s(y))
  & (Eq(s(x),s(y)) -> Eq(x,y)) & (Eq(x,y) -> Eq(s(x),s(y)))
  & Ge(x,o) & ~Ge(o,s(y))
  & (Ge(s(x),s(y)) -> Ge(x,y)) & (Ge(x,y) -> Ge(s(x),s(y)))
)");
}

}  // namespace tfnp::core
