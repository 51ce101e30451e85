#pragma once

// Boolean circuits over NOT/AND/OR with optional oracle gates.
//
// Text format, one gate per line, gates numbered from 0 in order:
//   INPUT i            input bit i; inputs are numbered 0,1,2,... in order
//   CONST b            constant 0 or 1
//   NOT g | AND g h | OR g h
//   ORACLE w q1 ... qn query on wires q1..qn; the answer has w bits
//   ANSWER o j         bit j of the answer of oracle gate o
//   OUTPUT g1 g2 ...   footer naming the output wires (may be empty)

#include "tfnp/bits.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace tfnp::circuit {

using Wire = std::uint32_t;

struct Gate {
  enum class Kind { Input, Const, Not, And, Or, Oracle, Answer };
  Kind kind = Kind::Const;
  std::uint32_t a = 0;  // Input: index, Const: value, Not/And/Or: operand, Answer: oracle gate
  std::uint32_t b = 0;  // And/Or: operand, Oracle: answer width, Answer: bit
  std::vector<Wire> query;  // Oracle only
  bool operator==(const Gate&) const = default;
};

class Circuit {
 public:
  Circuit() = default;

  std::size_t input_width() const { return input_width_; }
  std::size_t size() const { return gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Wire>& outputs() const { return outputs_; }
  std::size_t oracle_gate_count() const;
  bool has_oracle() const { return oracle_gate_count() > 0; }

  /// Appends a gate after checking that it only references earlier gates.
  Wire add(Gate g);
  void set_outputs(std::vector<Wire> outs);

  static Circuit parse(std::string_view text);
  std::string to_text() const;
  bool operator==(const Circuit&) const = default;

 private:
  std::vector<Gate> gates_;
  std::vector<Wire> outputs_;
  std::size_t input_width_ = 0;
};

/// Plain evaluation. Throws InputError on width mismatch or oracle gates.
BitString eval(const Circuit& c, const BitString& input);

/// Evaluates 64 inputs at once: lanes[i] holds input bit i of every lane.
/// Returns one word per output.
std::vector<std::uint64_t> eval_lanes(const Circuit& c, const std::vector<std::uint64_t>& lanes);

/// Evaluates c on every input of its width (at most 2^24 of them) and
/// returns the outputs in input order, the input read MSB-first as a number.
std::vector<BitString> truth_table(const Circuit& c);

using Oracle = std::function<BitString(const BitString& query)>;

struct OracleRun {
  BitString outputs;
  std::vector<std::pair<BitString, BitString>> calls;  // (query, answer)
  std::vector<bool> values;                            // one per gate, oracle gates read 0
};

/// Evaluation with oracle gates answered by `oracle`. Throws InputError when
/// an answer has the wrong width.
OracleRun eval_oracle_circuit(const Circuit& c, const BitString& input, const Oracle& oracle);

/// Circuit computing outer(inner(z)). Throws InputError on width mismatch.
Circuit compose(const Circuit& outer, const Circuit& inner);

/// Incremental builder with structural hashing and constant folding.
/// Throws ResourceLimit when the gate cap would be exceeded.
class Builder {
 public:
  explicit Builder(std::size_t gate_cap = std::size_t{1} << 20) : cap_(gate_cap) {}

  Wire input(std::size_t index);
  Wire constant(bool b);
  Wire lnot(Wire a);
  Wire land(Wire a, Wire b);
  Wire lor(Wire a, Wire b);
  Wire lxor(Wire a, Wire b);
  Wire mux(Wire sel, Wire if_true, Wire if_false);
  Wire oracle(const std::vector<Wire>& query, std::size_t answer_width);
  Wire answer(Wire oracle_gate, std::size_t bit);

  /// Constant value of a wire, if the builder proved one.
  std::optional<bool> const_value(Wire w) const;
  std::size_t size() const { return c_.size(); }
  std::size_t gate_cap() const { return cap_; }

  /// Produces the circuit with unreachable non-input gates removed. Inputs
  /// 0..width-1 are always kept so the input width is preserved.
  Circuit finish(const std::vector<Wire>& outputs, std::size_t input_width);

 private:
  Wire push(Gate g);
  bool is_negation_of(Wire a, Wire b) const;

  Circuit c_;
  std::size_t cap_;
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, Wire> memo_;
  std::map<std::size_t, Wire> inputs_;
};

}  // namespace tfnp::circuit
