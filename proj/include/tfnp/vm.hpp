#pragma once

// Budgeted verifier bytecode, the Machine interface shared by bytecode and
// native verifiers, and compilation of bytecode runs into circuits.

#include "tfnp/bits.hpp"
#include "tfnp/circuit.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tfnp::vm {

/// p(n) = c·n^k + d, saturating at 2^63.
struct PolyBound {
  std::uint64_t c = 1, k = 0, d = 0;
  std::uint64_t operator()(std::uint64_t n) const;
  std::string to_string() const;
  bool operator==(const PolyBound&) const = default;
};

enum class Op {
  Ldi, Mov, Add, Sub, Mul, Div, Mod, And, Or, Xor, Eq, Lt, Addi, Shl, Shr, Lnot, Sel,
  Len, Cap, Ldb, Jmp, Jz, Jnz, Accept, Reject, Halt, Out, Outif, Qout, Query, Alen, Acap, Lda
};

struct Instr {
  Op op = Op::Reject;
  std::uint32_t a = 0, b = 0, c = 0, d = 0;  // operands in source order
  std::size_t line = 0;
};

/// Assembly format:
///   program <name>
///   arity <k>
///   registers <r>
///   budget <c> <k> <d>
///   label:  op operands...   # comments
/// Registers are written rN, inputs by index, immediates as decimals.
struct Program {
  std::string name;
  std::size_t arity = 1;
  std::size_t registers = 1;
  PolyBound budget;
  std::vector<Instr> code;

  bool uses_oracle() const;
  static Program assemble(std::string_view text);
  std::string disassemble() const;
};

enum class Verdict { Accept, Reject };

struct RunResult {
  Verdict verdict = Verdict::Reject;
  std::uint64_t steps = 0;
  BitString output;
  std::size_t oracle_calls = 0;
  std::vector<std::uint32_t> trace;  // program counters, when requested
  bool accepted() const { return verdict == Verdict::Accept; }
};

/// Oracle for bytecode runs: maps a query to a witness (unpadded).
using RunOracle = std::function<BitString(const BitString& query)>;

/// Executes a program. Throws InputError on an arity mismatch and
/// BudgetExceeded when the step count passes budget(total input length).
RunResult run(const Program& p, std::span<const BitString> inputs, const RunOracle& oracle = nullptr,
              bool record_trace = false);

/// Counts steps of a native verifier against its budget.
class StepMeter {
 public:
  explicit StepMeter(std::uint64_t budget) : budget_(budget) {}
  void tick(std::uint64_t n = 1);
  std::uint64_t steps() const { return steps_; }

 private:
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
};

/// A deterministic budgeted decision procedure over bit-string inputs.
class Machine {
 public:
  virtual ~Machine() = default;
  virtual const std::string& name() const = 0;
  virtual std::size_t arity() const = 0;
  virtual PolyBound budget() const = 0;
  virtual RunResult run(std::span<const BitString> inputs) const = 0;
  /// The bytecode behind the machine, if it has one.
  virtual const Program* program() const { return nullptr; }
};

using MachinePtr = std::shared_ptr<const Machine>;

class ProgramVerifier final : public Machine {
 public:
  explicit ProgramVerifier(Program p) : p_(std::move(p)) {}
  const std::string& name() const override { return p_.name; }
  std::size_t arity() const override { return p_.arity; }
  PolyBound budget() const override { return p_.budget; }
  RunResult run(std::span<const BitString> inputs) const override { return vm::run(p_, inputs); }
  const Program* program() const override { return &p_; }

 private:
  Program p_;
};

/// Verifier written in C++ that charges its work to a StepMeter.
class NativeVerifier final : public Machine {
 public:
  using Fn = std::function<bool(std::span<const BitString>, StepMeter&)>;
  NativeVerifier(std::string name, std::size_t arity, PolyBound budget, Fn fn)
      : name_(std::move(name)), arity_(arity), budget_(budget), fn_(std::move(fn)) {}
  const std::string& name() const override { return name_; }
  std::size_t arity() const override { return arity_; }
  PolyBound budget() const override { return budget_; }
  RunResult run(std::span<const BitString> inputs) const override;

 private:
  std::string name_;
  std::size_t arity_;
  PolyBound budget_;
  Fn fn_;
};

MachinePtr make_program_machine(Program p);
MachinePtr make_native_machine(std::string name, std::size_t arity, PolyBound budget, NativeVerifier::Fn fn);

// ------------------------------------------------------------ compilation

/// How one program input is presented to the compiled circuit.
///  Free:   exactly `width` input wires, the input has that length.
///  Padded: width+1 wires holding pad_to_width(y, width+1) for any |y| <= width.
///  Fixed:  a constant baked into the circuit, no wires.
struct InputSpec {
  enum class Kind { Free, Padded, Fixed };
  Kind kind = Kind::Free;
  std::size_t width = 0;
  BitString bits;

  static InputSpec free(std::size_t w) { return {Kind::Free, w, {}}; }
  static InputSpec padded(std::size_t w) { return {Kind::Padded, w, {}}; }
  static InputSpec fixed(BitString b) { auto w = b.size(); return {Kind::Fixed, w, std::move(b)}; }
  std::size_t wires() const { return kind == Kind::Free ? width : kind == Kind::Padded ? width + 1 : 0; }
};

struct CompileOptions {
  std::size_t gate_cap = std::size_t{1} << 20;
  /// false: one output bit, the verdict. true: the output tape in padded
  /// form of width tape_bound+1 (all zeros when the tape overflows).
  bool tape_output = false;
  std::size_t tape_bound = 0;
  /// Witness bound of the oracle problem for a query of length n; oracle
  /// answers are presented in padded form of width bound(n)+1.
  std::function<std::size_t(std::size_t)> answer_bound;
};

struct CompileResult {
  circuit::Circuit circuit;
  std::uint64_t steps_unrolled = 0;
  std::size_t gates_built = 0;
};

/// Constant in the size assertion gates <= G·steps·(L+1)·registers·32.
inline constexpr std::uint64_t kGateConstant = 512;

/// Obliviously unrolls the program for every input of the given shapes.
/// Runs that do not halt within budget(max total length) compile to reject.
/// Throws ResourceLimit past the gate cap and InputError when an oracle
/// instruction runs under input-dependent control.
CompileResult compile_to_circuit(const Program& p, const std::vector<InputSpec>& inputs,
                                 const CompileOptions& options = {});

}  // namespace tfnp::vm
