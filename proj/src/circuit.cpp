#include "tfnp/circuit.hpp"

#include "tfnp/error.hpp"

#include <algorithm>
#include <sstream>

namespace tfnp::circuit {

using Kind = Gate::Kind;

std::size_t Circuit::oracle_gate_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return g.kind == Kind::Oracle; }));
}

Wire Circuit::add(Gate g) {
  const auto n = gates_.size();
  auto ref = [&](std::uint32_t w) {
    if (w >= n) throw InputError("gate " + std::to_string(n) + " references gate " + std::to_string(w) + " not defined before it");
  };
  switch (g.kind) {
    case Kind::Input:
      if (g.a != input_width_)
        throw InputError("gate " + std::to_string(n) + ": expected INPUT " + std::to_string(input_width_));
      ++input_width_;
      break;
    case Kind::Const:
      if (g.a > 1) throw InputError("CONST must be 0 or 1");
      break;
    case Kind::Not:
      ref(g.a);
      break;
    case Kind::And:
    case Kind::Or:
      ref(g.a);
      ref(g.b);
      break;
    case Kind::Oracle:
      for (auto q : g.query) ref(q);
      break;
    case Kind::Answer:
      ref(g.a);
      if (gates_[g.a].kind != Kind::Oracle) throw InputError("ANSWER must reference an ORACLE gate");
      if (g.b >= gates_[g.a].b) throw InputError("ANSWER bit out of range");
      break;
  }
  gates_.push_back(std::move(g));
  return static_cast<Wire>(n);
}

void Circuit::set_outputs(std::vector<Wire> outs) {
  for (auto w : outs)
    if (w >= gates_.size()) throw InputError("output references missing gate " + std::to_string(w));
  outputs_ = std::move(outs);
}

Circuit Circuit::parse(std::string_view text) {
  Circuit c;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_outputs = false;
  std::size_t lineno = 0;
  auto number = [&](std::istringstream& ls) -> std::uint32_t {
    long long v = -1;
    if (!(ls >> v) || v < 0 || v > 0xffffffffLL)
      throw InputError("line " + std::to_string(lineno) + ": expected a non-negative number");
    return static_cast<std::uint32_t>(v);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    if (have_outputs) throw InputError("line " + std::to_string(lineno) + ": gate after OUTPUT");
    Gate g;
    if (op == "OUTPUT") {
      std::vector<Wire> outs;
      std::uint32_t w;
      while (ls >> w) outs.push_back(w);
      if (!ls.eof()) throw InputError("line " + std::to_string(lineno) + ": bad OUTPUT list");
      c.set_outputs(std::move(outs));
      have_outputs = true;
      continue;
    }
    if (op == "INPUT") g = {Kind::Input, number(ls), 0, {}};
    else if (op == "CONST") g = {Kind::Const, number(ls), 0, {}};
    else if (op == "NOT") g = {Kind::Not, number(ls), 0, {}};
    else if (op == "AND") { auto a = number(ls); g = {Kind::And, a, number(ls), {}}; }
    else if (op == "OR") { auto a = number(ls); g = {Kind::Or, a, number(ls), {}}; }
    else if (op == "ANSWER") { auto a = number(ls); g = {Kind::Answer, a, number(ls), {}}; }
    else if (op == "ORACLE") {
      g.kind = Kind::Oracle;
      g.b = number(ls);
      std::uint32_t w;
      while (ls >> w) g.query.push_back(w);
      if (!ls.eof()) throw InputError("line " + std::to_string(lineno) + ": bad ORACLE query list");
    } else {
      throw InputError("line " + std::to_string(lineno) + ": unknown gate '" + op + "'");
    }
    std::string extra;
    if (op != "ORACLE" && (ls >> extra)) throw InputError("line " + std::to_string(lineno) + ": trailing tokens");
    try {
      c.add(std::move(g));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_outputs) throw InputError("circuit text has no OUTPUT line");
  return c;
}

std::string Circuit::to_text() const {
  std::string s;
  for (const auto& g : gates_) {
    switch (g.kind) {
      case Kind::Input: s += "INPUT " + std::to_string(g.a); break;
      case Kind::Const: s += "CONST " + std::to_string(g.a); break;
      case Kind::Not: s += "NOT " + std::to_string(g.a); break;
      case Kind::And: s += "AND " + std::to_string(g.a) + " " + std::to_string(g.b); break;
      case Kind::Or: s += "OR " + std::to_string(g.a) + " " + std::to_string(g.b); break;
      case Kind::Answer: s += "ANSWER " + std::to_string(g.a) + " " + std::to_string(g.b); break;
      case Kind::Oracle:
        s += "ORACLE " + std::to_string(g.b);
        for (auto q : g.query) s += " " + std::to_string(q);
        break;
    }
    s += "\n";
  }
  s += "OUTPUT";
  for (auto w : outputs_) s += " " + std::to_string(w);
  return s + "\n";
}

BitString eval(const Circuit& c, const BitString& input) {
  if (c.has_oracle()) throw InputError("circuit has oracle gates; use eval_oracle_circuit");
  return eval_oracle_circuit(c, input, nullptr).outputs;
}

std::vector<std::uint64_t> eval_lanes(const Circuit& c, const std::vector<std::uint64_t>& lanes) {
  if (lanes.size() != c.input_width())
    throw InputError("expected " + std::to_string(c.input_width()) + " input lanes, got " + std::to_string(lanes.size()));
  const auto& gates = c.gates();
  std::vector<std::uint64_t> v(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& g = gates[i];
    switch (g.kind) {
      case Kind::Input: v[i] = lanes[g.a]; break;
      case Kind::Const: v[i] = g.a ? ~std::uint64_t{0} : 0; break;
      case Kind::Not: v[i] = ~v[g.a]; break;
      case Kind::And: v[i] = v[g.a] & v[g.b]; break;
      case Kind::Or: v[i] = v[g.a] | v[g.b]; break;
      default: throw InputError("circuit has oracle gates; lane evaluation needs a plain circuit");
    }
  }
  std::vector<std::uint64_t> out;
  out.reserve(c.outputs().size());
  for (auto w : c.outputs()) out.push_back(v[w]);
  return out;
}

std::vector<BitString> truth_table(const Circuit& c) {
  const std::size_t n = c.input_width();
  if (n > 24) throw ResourceLimit("truth table over more than 24 inputs");
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<BitString> table;
  table.reserve(total);
  for (std::uint64_t base = 0; base < total; base += 64) {
    std::vector<std::uint64_t> lanes(n, 0);
    const std::uint64_t count = std::min<std::uint64_t>(64, total - base);
    for (std::uint64_t l = 0; l < count; ++l) {
      std::uint64_t x = base + l;
      for (std::size_t i = 0; i < n; ++i)
        if ((x >> (n - 1 - i)) & 1u) lanes[i] |= std::uint64_t{1} << l;
    }
    auto outs = eval_lanes(c, lanes);
    for (std::uint64_t l = 0; l < count; ++l) {
      BitString y;
      for (auto w : outs) y.push_back((w >> l) & 1u);
      table.push_back(std::move(y));
    }
  }
  return table;
}

OracleRun eval_oracle_circuit(const Circuit& c, const BitString& input, const Oracle& oracle) {
  if (input.size() != c.input_width())
    throw InputError("circuit expects " + std::to_string(c.input_width()) + " input bits, got " +
                     std::to_string(input.size()));
  OracleRun run;
  const auto& gates = c.gates();
  run.values.assign(gates.size(), false);
  std::map<Wire, BitString> answers;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& g = gates[i];
    bool v = false;
    switch (g.kind) {
      case Kind::Input: v = input[g.a]; break;
      case Kind::Const: v = g.a != 0; break;
      case Kind::Not: v = !run.values[g.a]; break;
      case Kind::And: v = run.values[g.a] && run.values[g.b]; break;
      case Kind::Or: v = run.values[g.a] || run.values[g.b]; break;
      case Kind::Oracle: {
        if (!oracle) throw InputError("oracle gate evaluated without an oracle");
        BitString q;
        for (auto w : g.query) q.push_back(run.values[w]);
        BitString a = oracle(q);
        if (a.size() != g.b)
          throw InputError("oracle answer has " + std::to_string(a.size()) + " bits, gate expects " + std::to_string(g.b));
        run.calls.emplace_back(q, a);
        answers[static_cast<Wire>(i)] = std::move(a);
        break;
      }
      case Kind::Answer: v = answers.at(g.a)[g.b]; break;
    }
    run.values[i] = v;
  }
  for (auto w : c.outputs()) run.outputs.push_back(run.values[w]);
  return run;
}

Circuit compose(const Circuit& outer, const Circuit& inner) {
  if (inner.outputs().size() != outer.input_width())
    throw InputError("cannot compose: inner has " + std::to_string(inner.outputs().size()) + " outputs, outer expects " +
                     std::to_string(outer.input_width()) + " inputs");
  Circuit c;
  for (const auto& g : inner.gates()) c.add(g);
  std::vector<Wire> map(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    Gate g = outer.gates()[i];
    if (g.kind == Kind::Input) {
      map[i] = inner.outputs()[g.a];
      continue;
    }
    switch (g.kind) {
      case Kind::Not: g.a = map[g.a]; break;
      case Kind::And:
      case Kind::Or: g.a = map[g.a]; g.b = map[g.b]; break;
      case Kind::Answer: g.a = map[g.a]; break;
      case Kind::Oracle:
        for (auto& q : g.query) q = map[q];
        break;
      default: break;
    }
    map[i] = c.add(std::move(g));
  }
  std::vector<Wire> outs;
  for (auto w : outer.outputs()) outs.push_back(map[w]);
  c.set_outputs(std::move(outs));
  return c;
}

// ---------------------------------------------------------------- Builder

Wire Builder::push(Gate g) {
  if (c_.size() >= cap_) throw ResourceLimit("circuit exceeds the gate cap of " + std::to_string(cap_));
  return c_.add(std::move(g));
}

Wire Builder::input(std::size_t index) {
  auto it = inputs_.find(index);
  if (it != inputs_.end()) return it->second;
  // Inputs may be requested in any order; the builder numbers them by
  // request order internally and finish() restores the real indices.
  Wire w = push({Kind::Input, static_cast<std::uint32_t>(inputs_.size()), static_cast<std::uint32_t>(index), {}});
  inputs_[index] = w;
  return w;
}

Wire Builder::constant(bool b) {
  auto key = std::make_tuple(static_cast<int>(Kind::Const), std::uint32_t{b}, std::uint32_t{0});
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Wire w = push({Kind::Const, b ? 1u : 0u, 0, {}});
  memo_[key] = w;
  return w;
}

std::optional<bool> Builder::const_value(Wire w) const {
  const auto& g = c_.gates()[w];
  if (g.kind == Kind::Const) return g.a != 0;
  return std::nullopt;
}

bool Builder::is_negation_of(Wire a, Wire b) const {
  const auto& ga = c_.gates()[a];
  const auto& gb = c_.gates()[b];
  return (ga.kind == Kind::Not && ga.a == b) || (gb.kind == Kind::Not && gb.a == a);
}

Wire Builder::lnot(Wire a) {
  if (auto v = const_value(a)) return constant(!*v);
  const auto& g = c_.gates()[a];
  if (g.kind == Kind::Not) return g.a;
  auto key = std::make_tuple(static_cast<int>(Kind::Not), a, std::uint32_t{0});
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Wire w = push({Kind::Not, a, 0, {}});
  memo_[key] = w;
  return w;
}

Wire Builder::land(Wire a, Wire b) {
  if (auto v = const_value(a)) return *v ? b : constant(false);
  if (auto v = const_value(b)) return *v ? a : constant(false);
  if (a == b) return a;
  if (is_negation_of(a, b)) return constant(false);
  if (a > b) std::swap(a, b);
  auto key = std::make_tuple(static_cast<int>(Kind::And), a, b);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Wire w = push({Kind::And, a, b, {}});
  memo_[key] = w;
  return w;
}

Wire Builder::lor(Wire a, Wire b) {
  if (auto v = const_value(a)) return *v ? constant(true) : b;
  if (auto v = const_value(b)) return *v ? constant(true) : a;
  if (a == b) return a;
  if (is_negation_of(a, b)) return constant(true);
  if (a > b) std::swap(a, b);
  auto key = std::make_tuple(static_cast<int>(Kind::Or), a, b);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Wire w = push({Kind::Or, a, b, {}});
  memo_[key] = w;
  return w;
}

Wire Builder::lxor(Wire a, Wire b) {
  if (auto v = const_value(a)) return *v ? lnot(b) : b;
  if (auto v = const_value(b)) return *v ? lnot(a) : a;
  if (a == b) return constant(false);
  if (is_negation_of(a, b)) return constant(true);
  return lor(land(a, lnot(b)), land(lnot(a), b));
}

Wire Builder::mux(Wire sel, Wire if_true, Wire if_false) {
  if (auto v = const_value(sel)) return *v ? if_true : if_false;
  if (if_true == if_false) return if_true;
  return lor(land(sel, if_true), land(lnot(sel), if_false));
}

Wire Builder::oracle(const std::vector<Wire>& query, std::size_t answer_width) {
  Gate g{Kind::Oracle, 0, static_cast<std::uint32_t>(answer_width), query};
  return push(std::move(g));
}

Wire Builder::answer(Wire oracle_gate, std::size_t bit) {
  auto key = std::make_tuple(static_cast<int>(Kind::Answer), oracle_gate, static_cast<std::uint32_t>(bit));
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Wire w = push({Kind::Answer, oracle_gate, static_cast<std::uint32_t>(bit), {}});
  memo_[key] = w;
  return w;
}

Circuit Builder::finish(const std::vector<Wire>& outputs, std::size_t input_width) {
  for (const auto& [idx, w] : inputs_)
    if (idx >= input_width) throw InputError("builder input " + std::to_string(idx) + " exceeds the declared width");
  const auto& gates = c_.gates();
  std::vector<bool> live(gates.size(), false);
  for (auto w : outputs) live[w] = true;
  for (std::size_t i = gates.size(); i-- > 0;) {
    if (!live[i]) continue;
    const auto& g = gates[i];
    switch (g.kind) {
      case Kind::Not: live[g.a] = true; break;
      case Kind::And:
      case Kind::Or: live[g.a] = live[g.b] = true; break;
      case Kind::Answer: live[g.a] = true; break;
      case Kind::Oracle:
        for (auto q : g.query) live[q] = true;
        break;
      default: break;
    }
  }
  // A live oracle keeps its whole answer so transcripts carry every bit.
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (gates[i].kind == Kind::Answer && live[gates[i].a]) live[i] = true;
  Circuit out;
  std::vector<Wire> map(gates.size());
  for (std::size_t i = 0; i < input_width; ++i) {
    Wire w = out.add({Kind::Input, static_cast<std::uint32_t>(i), 0, {}});
    auto it = inputs_.find(i);
    if (it != inputs_.end()) map[it->second] = w;
  }
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (!live[i]) continue;
    Gate g = gates[i];
    switch (g.kind) {
      case Kind::Input: continue;
      case Kind::Not: g.a = map[g.a]; break;
      case Kind::And:
      case Kind::Or: g.a = map[g.a]; g.b = map[g.b]; break;
      case Kind::Answer: g.a = map[g.a]; break;
      case Kind::Oracle:
        for (auto& q : g.query) q = map[q];
        break;
      default: break;
    }
    map[i] = out.add(std::move(g));
  }
  std::vector<Wire> outs;
  for (auto w : outputs) outs.push_back(map[w]);
  out.set_outputs(std::move(outs));
  return out;
}

}  // namespace tfnp::circuit
