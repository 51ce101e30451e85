#include "tfnp/vm.hpp"

#include "tfnp/error.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tfnp::vm {

std::uint64_t PolyBound::operator()(std::uint64_t n) const {
  constexpr std::uint64_t kMax = std::uint64_t{1} << 63;
  auto mul = [&](std::uint64_t x, std::uint64_t y) -> std::uint64_t {
    if (x == 0 || y == 0) return 0;
    if (x > kMax / y) return kMax;
    return x * y;
  };
  std::uint64_t p = 1;
  for (std::uint64_t i = 0; i < k && p != 0 && p < kMax; ++i) p = mul(p, n);
  std::uint64_t v = mul(c, p);
  return std::min(kMax, v + std::min(d, kMax - std::min(v, kMax)));
}

std::string PolyBound::to_string() const {
  return std::to_string(c) + "*n^" + std::to_string(k) + "+" + std::to_string(d);
}

void StepMeter::tick(std::uint64_t n) {
  steps_ += n;
  if (steps_ > budget_)
    throw BudgetExceeded("native verifier used " + std::to_string(steps_) + " steps, budget " + std::to_string(budget_));
}

RunResult NativeVerifier::run(std::span<const BitString> inputs) const {
  if (inputs.size() != arity_)
    throw InputError(name_ + ": expected " + std::to_string(arity_) + " inputs, got " + std::to_string(inputs.size()));
  std::uint64_t total = 0;
  for (const auto& x : inputs) total += x.size();
  StepMeter meter(budget_(total));
  RunResult r;
  r.verdict = fn_(inputs, meter) ? Verdict::Accept : Verdict::Reject;
  r.steps = meter.steps();
  return r;
}

MachinePtr make_program_machine(Program p) { return std::make_shared<ProgramVerifier>(std::move(p)); }

MachinePtr make_native_machine(std::string name, std::size_t arity, PolyBound budget, NativeVerifier::Fn fn) {
  return std::make_shared<NativeVerifier>(std::move(name), arity, budget, std::move(fn));
}

// ------------------------------------------------------------ assembler

namespace {

// Operand kinds: R register, I immediate, K input index, L label.
struct OpInfo {
  const char* mnemonic;
  Op op;
  const char* operands;
};

constexpr OpInfo kOps[] = {
    {"ldi", Op::Ldi, "RI"},   {"mov", Op::Mov, "RR"},    {"add", Op::Add, "RRR"},  {"sub", Op::Sub, "RRR"},
    {"mul", Op::Mul, "RRR"},  {"div", Op::Div, "RRR"},   {"mod", Op::Mod, "RRR"},  {"and", Op::And, "RRR"},
    {"or", Op::Or, "RRR"},    {"xor", Op::Xor, "RRR"},   {"eq", Op::Eq, "RRR"},    {"lt", Op::Lt, "RRR"},
    {"addi", Op::Addi, "RRI"}, {"shl", Op::Shl, "RRI"},  {"shr", Op::Shr, "RRI"},  {"lnot", Op::Lnot, "RR"},
    {"sel", Op::Sel, "RRRR"}, {"len", Op::Len, "RK"},    {"cap", Op::Cap, "RK"},   {"ldb", Op::Ldb, "RKR"},
    {"jmp", Op::Jmp, "L"},    {"jz", Op::Jz, "RL"},      {"jnz", Op::Jnz, "RL"},   {"accept", Op::Accept, ""},
    {"reject", Op::Reject, ""}, {"halt", Op::Halt, "R"}, {"out", Op::Out, "R"},    {"outif", Op::Outif, "RR"},
    {"qout", Op::Qout, "R"},  {"query", Op::Query, ""},  {"alen", Op::Alen, "R"},  {"acap", Op::Acap, "R"},
    {"lda", Op::Lda, "RR"},
};

const OpInfo& info(Op op) {
  for (const auto& i : kOps)
    if (i.op == op) return i;
  throw std::logic_error("unknown opcode");
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ' ' || ch == '\t' || ch == ',' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw InputError("line " + std::to_string(line) + ": expected a number, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(line) + ": number out of range '" + s + "'");
  }
}

}  // namespace

bool Program::uses_oracle() const {
  return std::any_of(code.begin(), code.end(), [](const Instr& i) {
    return i.op == Op::Qout || i.op == Op::Query || i.op == Op::Alen || i.op == Op::Acap || i.op == Op::Lda;
  });
}

Program Program::assemble(std::string_view text) {
  Program p;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool have_name = false, have_arity = false, have_regs = false, have_budget = false;
  std::map<std::string, std::size_t> labels;
  struct Pending {
    std::size_t instr;
    int slot;
    std::string label;
    std::size_t line;
  };
  std::vector<Pending> fixups;

  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find_first_of("#;");
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = tokens(raw);
    while (!toks.empty() && toks[0].back() == ':') {
      auto name = toks[0].substr(0, toks[0].size() - 1);
      if (name.empty() || labels.count(name)) throw InputError("line " + std::to_string(lineno) + ": bad or duplicate label");
      labels[name] = p.code.size();
      toks.erase(toks.begin());
    }
    if (toks.empty()) continue;
    const auto& head = toks[0];
    auto need = [&](std::size_t n) {
      if (toks.size() != n + 1) throw InputError("line " + std::to_string(lineno) + ": '" + head + "' expects " + std::to_string(n) + " operands");
    };
    if (head == "program") {
      need(1);
      p.name = toks[1];
      have_name = true;
      continue;
    }
    if (head == "arity") {
      need(1);
      p.arity = parse_u64(toks[1], lineno);
      have_arity = true;
      continue;
    }
    if (head == "registers") {
      need(1);
      p.registers = parse_u64(toks[1], lineno);
      if (p.registers == 0 || p.registers > 256) throw InputError("line " + std::to_string(lineno) + ": register count must be 1..256");
      have_regs = true;
      continue;
    }
    if (head == "budget") {
      need(3);
      p.budget = {parse_u64(toks[1], lineno), parse_u64(toks[2], lineno), parse_u64(toks[3], lineno)};
      have_budget = true;
      continue;
    }
    const OpInfo* oi = nullptr;
    for (const auto& i : kOps)
      if (head == i.mnemonic) oi = &i;
    if (!oi) throw InputError("line " + std::to_string(lineno) + ": unknown instruction '" + head + "'");
    std::string kinds = oi->operands;
    need(kinds.size());
    Instr ins;
    ins.op = oi->op;
    ins.line = lineno;
    std::uint32_t* slots[] = {&ins.a, &ins.b, &ins.c, &ins.d};
    for (std::size_t s = 0; s < kinds.size(); ++s) {
      const auto& t = toks[s + 1];
      switch (kinds[s]) {
        case 'R': {
          if (t.size() < 2 || t[0] != 'r') throw InputError("line " + std::to_string(lineno) + ": expected a register, got '" + t + "'");
          auto r = parse_u64(t.substr(1), lineno);
          if (r >= p.registers) throw InputError("line " + std::to_string(lineno) + ": register " + t + " out of range");
          *slots[s] = static_cast<std::uint32_t>(r);
          break;
        }
        case 'I': {
          bool neg = !t.empty() && t[0] == '-';
          auto v = parse_u64(neg ? t.substr(1) : t, lineno);
          if (v > 0xffffffffULL) throw InputError("line " + std::to_string(lineno) + ": immediate out of range");
          *slots[s] = neg ? static_cast<std::uint32_t>(0u - static_cast<std::uint32_t>(v)) : static_cast<std::uint32_t>(v);
          if ((oi->op == Op::Shl || oi->op == Op::Shr) && v >= 32)
            throw InputError("line " + std::to_string(lineno) + ": shift amount must be below 32");
          break;
        }
        case 'K': {
          auto k = parse_u64(t, lineno);
          if (have_arity && k >= p.arity) throw InputError("line " + std::to_string(lineno) + ": input index out of range");
          *slots[s] = static_cast<std::uint32_t>(k);
          break;
        }
        case 'L':
          fixups.push_back({p.code.size(), static_cast<int>(s), t, lineno});
          break;
      }
    }
    p.code.push_back(ins);
  }
  if (!have_name || !have_arity || !have_regs || !have_budget)
    throw InputError("program header needs program, arity, registers and budget lines");
  for (const auto& f : fixups) {
    auto it = labels.find(f.label);
    if (it == labels.end()) throw InputError("line " + std::to_string(f.line) + ": undefined label '" + f.label + "'");
    std::uint32_t* slots[] = {&p.code[f.instr].a, &p.code[f.instr].b, &p.code[f.instr].c, &p.code[f.instr].d};
    *slots[f.slot] = static_cast<std::uint32_t>(it->second);
  }
  for (const auto& ins : p.code) {
    std::string kinds = info(ins.op).operands;
    const std::uint32_t vals[] = {ins.a, ins.b, ins.c, ins.d};
    for (std::size_t s = 0; s < kinds.size(); ++s)
      if (kinds[s] == 'K' && vals[s] >= p.arity)
        throw InputError("line " + std::to_string(ins.line) + ": input index out of range");
  }
  return p;
}

std::string Program::disassemble() const {
  std::string s = "program " + name + "\narity " + std::to_string(arity) + "\nregisters " + std::to_string(registers) +
                  "\nbudget " + std::to_string(budget.c) + " " + std::to_string(budget.k) + " " +
                  std::to_string(budget.d) + "\n";
  std::vector<bool> target(code.size() + 1, false);
  for (const auto& ins : code) {
    if (ins.op == Op::Jmp) target[ins.a] = true;
    if (ins.op == Op::Jz || ins.op == Op::Jnz) target[ins.b] = true;
  }
  auto label = [](std::uint32_t t) { return "L" + std::to_string(t); };
  for (std::size_t i = 0; i <= code.size(); ++i) {
    if (target[i]) s += label(static_cast<std::uint32_t>(i)) + ":\n";
    if (i == code.size()) break;
    const auto& ins = code[i];
    const auto& oi = info(ins.op);
    s += "  ";
    s += oi.mnemonic;
    std::string kinds = oi.operands;
    const std::uint32_t vals[] = {ins.a, ins.b, ins.c, ins.d};
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      s += " ";
      switch (kinds[k]) {
        case 'R': s += "r" + std::to_string(vals[k]); break;
        case 'L': s += label(vals[k]); break;
        default: s += std::to_string(vals[k]); break;
      }
    }
    s += "\n";
  }
  return s;
}

// ------------------------------------------------------------ interpreter

RunResult run(const Program& p, std::span<const BitString> inputs, const RunOracle& oracle, bool record_trace) {
  if (inputs.size() != p.arity)
    throw InputError(p.name + ": expected " + std::to_string(p.arity) + " inputs, got " + std::to_string(inputs.size()));
  std::uint64_t total = 0;
  for (const auto& x : inputs) total += x.size();
  const std::uint64_t budget = p.budget(total);
  std::vector<std::uint32_t> r(p.registers, 0);
  RunResult res;
  BitString qbuf, answer;
  auto input_bit = [&](const BitString& s, std::uint32_t i) -> std::uint32_t { return i < s.size() && s[i] ? 1u : 0u; };
  std::size_t pc = 0;
  while (pc < p.code.size()) {
    if (res.steps >= budget)
      throw BudgetExceeded(p.name + ": exceeded budget " + p.budget.to_string() + " = " + std::to_string(budget) +
                           " steps at input length " + std::to_string(total));
    ++res.steps;
    if (record_trace) res.trace.push_back(static_cast<std::uint32_t>(pc));
    const auto& in = p.code[pc];
    std::size_t next = pc + 1;
    switch (in.op) {
      case Op::Ldi: r[in.a] = in.b; break;
      case Op::Mov: r[in.a] = r[in.b]; break;
      case Op::Add: r[in.a] = r[in.b] + r[in.c]; break;
      case Op::Sub: r[in.a] = r[in.b] - r[in.c]; break;
      case Op::Mul: r[in.a] = r[in.b] * r[in.c]; break;
      case Op::Div: r[in.a] = r[in.c] == 0 ? 0 : r[in.b] / r[in.c]; break;
      case Op::Mod: r[in.a] = r[in.c] == 0 ? r[in.b] : r[in.b] % r[in.c]; break;
      case Op::And: r[in.a] = r[in.b] & r[in.c]; break;
      case Op::Or: r[in.a] = r[in.b] | r[in.c]; break;
      case Op::Xor: r[in.a] = r[in.b] ^ r[in.c]; break;
      case Op::Eq: r[in.a] = r[in.b] == r[in.c] ? 1 : 0; break;
      case Op::Lt: r[in.a] = r[in.b] < r[in.c] ? 1 : 0; break;
      case Op::Addi: r[in.a] = r[in.b] + in.c; break;
      case Op::Shl: r[in.a] = r[in.b] << in.c; break;
      case Op::Shr: r[in.a] = r[in.b] >> in.c; break;
      case Op::Lnot: r[in.a] = r[in.b] == 0 ? 1 : 0; break;
      case Op::Sel: r[in.a] = r[in.b] != 0 ? r[in.c] : r[in.d]; break;
      case Op::Len:
      case Op::Cap: r[in.a] = static_cast<std::uint32_t>(inputs[in.b].size()); break;
      case Op::Ldb: r[in.a] = input_bit(inputs[in.b], r[in.c]); break;
      case Op::Jmp: next = in.a; break;
      case Op::Jz: if (r[in.a] == 0) next = in.b; break;
      case Op::Jnz: if (r[in.a] != 0) next = in.b; break;
      case Op::Accept: res.verdict = Verdict::Accept; return res;
      case Op::Reject: res.verdict = Verdict::Reject; return res;
      case Op::Halt: res.verdict = r[in.a] != 0 ? Verdict::Accept : Verdict::Reject; return res;
      case Op::Out: res.output.push_back(r[in.a] & 1u); break;
      case Op::Outif: if (r[in.a] != 0) res.output.push_back(r[in.b] & 1u); break;
      case Op::Qout: qbuf.push_back(r[in.a] & 1u); break;
      case Op::Query:
        if (!oracle) throw InputError(p.name + ": query instruction without an oracle");
        answer = oracle(qbuf);
        qbuf = BitString{};
        ++res.oracle_calls;
        break;
      case Op::Alen:
      case Op::Acap: r[in.a] = static_cast<std::uint32_t>(answer.size()); break;
      case Op::Lda: r[in.a] = input_bit(answer, r[in.b]); break;
    }
    pc = next;
  }
  res.verdict = Verdict::Reject;
  return res;
}

// ------------------------------------------------------------ compiler

namespace {

using circuit::Builder;
using circuit::Wire;
using Word = std::array<Wire, 32>;
using Bits = std::vector<Wire>;

// Symbolic view of a bit string input: payload bits, length, capacity.
struct View {
  Bits raw;
  Word len{};
  std::uint32_t cap = 0;
};

class Compiler {
 public:
  Compiler(const Program& p, const CompileOptions& o) : p_(p), o_(o), b_(o.gate_cap) {}

  CompileResult compile(const std::vector<InputSpec>& specs);

 private:
  Wire zero() { return b_.constant(false); }
  Wire one() { return b_.constant(true); }

  Word const_word(std::uint32_t v) {
    Word w;
    for (int i = 0; i < 32; ++i) w[i] = b_.constant((v >> i) & 1u);
    return w;
  }

  Bits add_bits(const Bits& a, const Bits& b, Wire carry) {
    Bits s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      Wire x = b_.lxor(a[i], b[i]);
      s[i] = b_.lxor(x, carry);
      carry = b_.lor(b_.land(a[i], b[i]), b_.land(x, carry));
    }
    carry_out_ = carry;
    return s;
  }
  Bits invert(const Bits& a) {
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = b_.lnot(a[i]);
    return r;
  }
  static Bits bits(const Word& w) { return Bits(w.begin(), w.end()); }
  static Word word(const Bits& b) {
    Word w;
    std::copy_n(b.begin(), 32, w.begin());
    return w;
  }
  // a - b on equal-width vectors; carry_out_ is 1 iff a >= b.
  Bits sub_bits(const Bits& a, const Bits& b) { return add_bits(a, invert(b), one()); }

  Word add(const Word& a, const Word& b) { return word(add_bits(bits(a), bits(b), zero())); }
  Word sub(const Word& a, const Word& b) { return word(sub_bits(bits(a), bits(b))); }
  Wire lt(const Word& a, const Word& b) {
    sub_bits(bits(a), bits(b));
    return b_.lnot(carry_out_);
  }
  Wire nonzero(const Word& a) {
    Wire r = zero();
    for (auto w : a) r = b_.lor(r, w);
    return r;
  }
  Wire eq(const Word& a, const Word& b) {
    Wire r = one();
    for (int i = 0; i < 32; ++i) r = b_.land(r, b_.lnot(b_.lxor(a[i], b[i])));
    return r;
  }
  Wire eq_const(const Word& a, std::uint32_t v) {
    Wire r = one();
    for (int i = 0; i < 32; ++i) r = b_.land(r, ((v >> i) & 1u) ? a[i] : b_.lnot(a[i]));
    return r;
  }
  Word bool_word(Wire w) {
    Word r = const_word(0);
    r[0] = w;
    return r;
  }
  Word mul(const Word& a, const Word& b) {
    Bits acc(32, zero());
    for (int i = 0; i < 32; ++i) {
      if (b_.const_value(b[i]) == false) continue;
      Bits part(32, zero());
      for (int j = 0; i + j < 32; ++j) part[i + j] = b_.land(a[j], b[i]);
      acc = add_bits(acc, part, zero());
    }
    return word(acc);
  }
  // Restoring division; divisor zero yields quotient all ones, remainder a.
  std::pair<Word, Word> divmod(const Word& a, const Word& d) {
    Bits r(33, zero());
    Bits dd(bits(d));
    dd.push_back(zero());
    Word q;
    for (int i = 31; i >= 0; --i) {
      for (int j = 32; j > 0; --j) r[j] = r[j - 1];
      r[0] = a[i];
      Bits diff = sub_bits(r, dd);
      Wire ge = carry_out_;
      for (int j = 0; j < 33; ++j) r[j] = b_.mux(ge, diff[j], r[j]);
      q[i] = ge;
    }
    return {q, word(r)};
  }
  Word mux_word(Wire sel, const Word& t, const Word& f) {
    Word r;
    for (int i = 0; i < 32; ++i) r[i] = b_.mux(sel, t[i], f[i]);
    return r;
  }
  Word shl(const Word& a, unsigned k) {
    Word r = const_word(0);
    for (unsigned i = k; i < 32; ++i) r[i] = a[i - k];
    return r;
  }
  Word shr(const Word& a, unsigned k) {
    Word r = const_word(0);
    for (unsigned i = 0; i + k < 32; ++i) r[i] = a[i + k];
    return r;
  }
  Word bitwise(const Word& a, const Word& b, Op op) {
    Word r;
    for (int i = 0; i < 32; ++i)
      r[i] = op == Op::And ? b_.land(a[i], b[i]) : op == Op::Or ? b_.lor(a[i], b[i]) : b_.lxor(a[i], b[i]);
    return r;
  }
  Wire bit_at(const View& v, const Word& idx) {
    std::optional<std::uint32_t> c = 0;
    for (int i = 0; i < 32 && c; ++i) {
      auto bv = b_.const_value(idx[i]);
      if (!bv) c.reset();
      else if (*bv) *c |= 1u << i;
    }
    if (c) return *c < v.raw.size() ? v.raw[*c] : zero();
    Wire r = zero();
    for (std::size_t j = 0; j < v.raw.size(); ++j)
      r = b_.lor(r, b_.land(eq_const(idx, static_cast<std::uint32_t>(j)), v.raw[j]));
    return r;
  }
  View padded_view(const Bits& p) {
    View v;
    const std::size_t w = p.size() - 1;
    Bits later(p.size() + 1, zero());
    for (std::size_t j = p.size(); j-- > 0;) later[j] = b_.lor(later[j + 1], p[j]);
    v.raw.resize(w);
    for (std::size_t j = 0; j < w; ++j) v.raw[j] = b_.land(p[j], later[j + 1]);
    v.len = const_word(0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      Wire marker = b_.land(p[j], b_.lnot(later[j + 1]));
      for (int i = 0; i < 32; ++i)
        if ((j >> i) & 1u) v.len[i] = b_.lor(v.len[i], marker);
    }
    v.cap = static_cast<std::uint32_t>(w);
    return v;
  }

  const Program& p_;
  const CompileOptions& o_;
  Builder b_;
  Wire carry_out_ = 0;
};

CompileResult Compiler::compile(const std::vector<InputSpec>& specs) {
  if (specs.size() != p_.arity)
    throw InputError(p_.name + ": expected " + std::to_string(p_.arity) + " input specs, got " + std::to_string(specs.size()));
  if (p_.uses_oracle() && !o_.answer_bound) throw InputError(p_.name + ": oracle program compiled without an answer bound");

  std::vector<View> views;
  std::size_t next_wire = 0;
  std::uint64_t max_total = 0;
  for (const auto& s : specs) {
    View v;
    max_total += s.width;
    switch (s.kind) {
      case InputSpec::Kind::Free:
        for (std::size_t j = 0; j < s.width; ++j) v.raw.push_back(b_.input(next_wire++));
        v.len = const_word(static_cast<std::uint32_t>(s.width));
        v.cap = static_cast<std::uint32_t>(s.width);
        break;
      case InputSpec::Kind::Padded: {
        Bits p;
        for (std::size_t j = 0; j <= s.width; ++j) p.push_back(b_.input(next_wire++));
        v = padded_view(p);
        break;
      }
      case InputSpec::Kind::Fixed:
        for (std::size_t j = 0; j < s.bits.size(); ++j) v.raw.push_back(b_.constant(s.bits[j]));
        v.len = const_word(static_cast<std::uint32_t>(s.bits.size()));
        v.cap = static_cast<std::uint32_t>(s.bits.size());
        break;
    }
    views.push_back(std::move(v));
  }

  const std::size_t L = p_.code.size();
  std::vector<Wire> pc(L, zero());
  if (L > 0) pc[0] = one();
  Wire acc = zero();
  std::vector<Word> regs(p_.registers, const_word(0));
  const std::size_t M = o_.tape_bound;
  Bits tape(o_.tape_output ? M + 1 : 0, zero());
  Bits pos(o_.tape_output ? M + 2 : 0, zero());
  if (o_.tape_output) pos[0] = one();
  Bits qbuf;
  View answer;
  answer.len = const_word(0);

  const std::uint64_t max_steps = p_.budget(max_total);
  std::uint64_t steps = 0;
  for (; steps < max_steps; ++steps) {
    bool live = false;
    for (auto w : pc)
      if (b_.const_value(w) != false) live = true;
    if (!live) break;

    std::vector<Wire> npc(L, zero());
    auto regs_next = regs;
    auto go = [&](std::size_t target, Wire cond) {
      if (target < L) npc[target] = b_.lor(npc[target], cond);
    };
    for (std::size_t i = 0; i < L; ++i) {
      const Wire g = pc[i];
      if (b_.const_value(g) == false) continue;
      const auto& in = p_.code[i];
      auto write = [&](std::uint32_t rd, const Word& v) { regs_next[rd] = mux_word(g, v, regs_next[rd]); };
      auto require_const = [&] {
        if (b_.const_value(g) != true)
          throw InputError(p_.name + ": oracle instruction at line " + std::to_string(in.line) +
                           " runs under input-dependent control");
      };
      switch (in.op) {
        case Op::Ldi: write(in.a, const_word(in.b)); break;
        case Op::Mov: write(in.a, regs[in.b]); break;
        case Op::Add: write(in.a, add(regs[in.b], regs[in.c])); break;
        case Op::Sub: write(in.a, sub(regs[in.b], regs[in.c])); break;
        case Op::Mul: write(in.a, mul(regs[in.b], regs[in.c])); break;
        case Op::Div: {
          auto [q, rem] = divmod(regs[in.b], regs[in.c]);
          write(in.a, mux_word(nonzero(regs[in.c]), q, const_word(0)));
          break;
        }
        case Op::Mod: write(in.a, divmod(regs[in.b], regs[in.c]).second); break;
        case Op::And:
        case Op::Or:
        case Op::Xor: write(in.a, bitwise(regs[in.b], regs[in.c], in.op)); break;
        case Op::Eq: write(in.a, bool_word(eq(regs[in.b], regs[in.c]))); break;
        case Op::Lt: write(in.a, bool_word(lt(regs[in.b], regs[in.c]))); break;
        case Op::Addi: write(in.a, add(regs[in.b], const_word(in.c))); break;
        case Op::Shl: write(in.a, shl(regs[in.b], in.c)); break;
        case Op::Shr: write(in.a, shr(regs[in.b], in.c)); break;
        case Op::Lnot: write(in.a, bool_word(b_.lnot(nonzero(regs[in.b])))); break;
        case Op::Sel: write(in.a, mux_word(nonzero(regs[in.b]), regs[in.c], regs[in.d])); break;
        case Op::Len: write(in.a, views[in.b].len); break;
        case Op::Cap: write(in.a, const_word(views[in.b].cap)); break;
        case Op::Ldb: write(in.a, bool_word(bit_at(views[in.b], regs[in.c]))); break;
        case Op::Jmp: go(in.a, g); continue;
        case Op::Jz:
        case Op::Jnz: {
          Wire nz = nonzero(regs[in.a]);
          Wire jump = in.op == Op::Jz ? b_.lnot(nz) : nz;
          go(in.b, b_.land(g, jump));
          go(i + 1, b_.land(g, b_.lnot(jump)));
          continue;
        }
        case Op::Accept: acc = b_.lor(acc, g); continue;
        case Op::Reject: continue;
        case Op::Halt: acc = b_.lor(acc, b_.land(g, nonzero(regs[in.a]))); continue;
        case Op::Out:
        case Op::Outif: {
          if (!o_.tape_output) break;
          Wire cond = in.op == Op::Out ? g : b_.land(g, nonzero(regs[in.a]));
          Wire bit = in.op == Op::Out ? regs[in.a][0] : regs[in.b][0];
          Bits npos(M + 2, zero());
          for (std::size_t j = 0; j <= M; ++j) tape[j] = b_.mux(b_.land(cond, pos[j]), bit, tape[j]);
          for (std::size_t j = 0; j < M + 2; ++j) {
            Wire shifted = j == 0 ? zero() : j == M + 1 ? b_.lor(pos[M], pos[M + 1]) : pos[j - 1];
            npos[j] = b_.mux(cond, shifted, pos[j]);
          }
          pos = std::move(npos);
          break;
        }
        case Op::Qout:
          require_const();
          qbuf.push_back(regs[in.a][0]);
          break;
        case Op::Query: {
          require_const();
          const std::size_t width = o_.answer_bound(qbuf.size()) + 1;
          Wire og = b_.oracle(qbuf, width);
          Bits ans;
          for (std::size_t j = 0; j < width; ++j) ans.push_back(b_.answer(og, j));
          answer = padded_view(ans);
          qbuf.clear();
          break;
        }
        case Op::Alen: write(in.a, answer.len); break;
        case Op::Acap: write(in.a, const_word(answer.cap)); break;
        case Op::Lda: write(in.a, bool_word(bit_at(answer, regs[in.b]))); break;
      }
      go(i + 1, g);
    }
    pc = std::move(npc);
    regs = std::move(regs_next);
  }

  std::vector<Wire> outs;
  if (o_.tape_output) {
    // Overflow (pos[M+1]) blanks the whole tape.
    const Wire fits = b_.lnot(pos[M + 1]);
    for (std::size_t j = 0; j <= M; ++j) outs.push_back(b_.lor(b_.land(tape[j], fits), pos[j]));
  } else {
    outs.push_back(acc);
  }
  CompileResult res;
  res.steps_unrolled = steps;
  res.gates_built = b_.size();
  const std::uint64_t limit = kGateConstant * (steps + 1) * (L + 1) * (p_.registers + 1) * 32;
  if (res.gates_built > limit)
    throw std::logic_error(p_.name + ": compiled circuit exceeds the documented size bound");
  res.circuit = b_.finish(outs, next_wire);
  return res;
}

}  // namespace

CompileResult compile_to_circuit(const Program& p, const std::vector<InputSpec>& inputs, const CompileOptions& options) {
  return Compiler(p, options).compile(inputs);
}

}  // namespace tfnp::vm
