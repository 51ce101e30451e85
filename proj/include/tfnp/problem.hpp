#pragma once

// Total search problems (p, R) and the concrete problems FACTORING, PIGEON,
// SUCC and HCS.

#include "tfnp/bits.hpp"
#include "tfnp/circuit.hpp"
#include "tfnp/logic.hpp"
#include "tfnp/vm.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace tfnp::core {

using vm::MachinePtr;
using vm::PolyBound;

/// All witnesses of an instance, sorted length-lexicographically.
using Enumerator = std::function<std::vector<BitString>(const BitString& x)>;

struct TFNPProblem {
  std::string name;
  PolyBound bound;
  MachinePtr verifier;  // arity 2: (x, y)
  Enumerator enumerate;  // optional reference enumerator
};

/// |y| <= p(|x|) and R(x, y). BudgetExceeded propagates.
bool verify_solution(const TFNPProblem& p, const BitString& x, const BitString& y);

/// Default ceiling on p(|x|) for exhaustive length-lex sweeps.
inline constexpr std::size_t kSweepBits = 20;

/// Least witness in length-lex order. Sweeps when p(|x|) <= max_bits,
/// otherwise takes the least enumerated witness. Throws ResourceLimit
/// (search space too large) or TotalityViolation (no witness).
BitString solve_brute(const TFNPProblem& p, const BitString& x, std::size_t max_bits = kSweepBits);

/// Every witness, sorted. Uses the enumerator when present, else sweeps.
std::vector<BitString> all_witnesses(const TFNPProblem& p, const BitString& x, std::size_t max_bits = kSweepBits);

/// Every y with |y| <= n in length-lex order (n <= 24).
std::vector<BitString> strings_up_to(std::size_t n);

// ------------------------------------------------------------ problems

/// Q(N, M) = N prime or (1 < M < N and M | N), with |M| <= |N|; N <= 1
/// accepts any M. Bound p(n) = n.
TFNPProblem factoring_problem();
/// y = x + k mod 2^|x| with |y| = |x|; unique witnesses. Bound p(n) = n.
TFNPProblem add_const_problem(std::uint32_t k);
inline TFNPProblem succ_problem() { return add_const_problem(1); }

/// Circuit family for PIGEON: for |r| = n the circuit has 2n inputs (r,
/// then x zero-padded to n bits) and n outputs.
struct PigeonFamily {
  std::string name;
  std::function<circuit::Circuit(std::size_t n)> make;
};

/// Shared cache so each width is built once.
class PigeonMap {
 public:
  explicit PigeonMap(PigeonFamily family);
  const std::string& name() const { return family_.name; }
  const circuit::Circuit& at(std::size_t n) const;
  /// f(r, x) for a value x <= r, |r| = n.
  std::uint64_t apply(const BitString& r, std::uint64_t x) const;

 private:
  PigeonFamily family_;
  mutable std::vector<std::unique_ptr<circuit::Circuit>> cache_;
  mutable std::mutex mu_;
};

std::vector<PigeonFamily> pigeon_battery(std::uint64_t seed = 0, std::size_t random_count = 4);
PigeonFamily pigeon_family_by_name(const std::string& name, std::uint64_t seed = 0);

/// Witness u is encode(a) with a <= r and f(r,a) >= r, or encode(a, b) with
/// a != b, both <= r and f(r,a) = f(r,b). Parts must be canonical numbers.
/// Bound p(n) = 6n + 8.
TFNPProblem pigeon_problem(const PigeonFamily& family);
std::shared_ptr<const PigeonMap> pigeon_map(const PigeonFamily& family);

/// HCS instances: the text "t1,t2;t1,t2;..." as bytes. Malformed bytes
/// decode to the empty tuple list.
BitString encode_hcs_instance(const std::vector<std::vector<logic::Term>>& tuples);
std::vector<std::vector<logic::Term>> decode_hcs_instance(const logic::UniversalSentence& phi, const BitString& x);

/// HCS(Φ): the witness assigns every atom of the expansion, bit i to atom i.
/// Bound p(n) = a·n, a = atom occurrences in the matrix.
TFNPProblem hcs_problem(const logic::UniversalSentence& phi);

/// Universal pigeonhole axioms over o, s, Eq, Ge used by the worked
/// PIGEON to HCS reduction.
logic::UniversalSentence php_sentence();
/// s^k(o)
logic::Term unary_numeral(std::uint64_t k);

}  // namespace tfnp::core
