#pragma once

// Propositional proof systems with Resolution as the concrete one, disjoint
// NP and coNP pairs, their reductions, and the SAT proof systems including
// the composite-number system.

#include "tfnp/prop.hpp"
#include "tfnp/reduction.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tfnp::pairs {

using core::PolyBound;
using core::TFNPProblem;
using prop::Cnf;
using prop::PropFormula;

// ------------------------------------------------------------ resolution

struct ResolutionStep {
  enum class Kind { Initial, Resolvent };
  Kind kind = Kind::Initial;
  std::size_t i = 0;  // Initial: clause index in the CNF. Resolvent: step with +pivot
  std::size_t j = 0;  // Resolvent: step with -pivot
  std::uint32_t pivot = 0;
};

struct ResolutionRefutation {
  std::vector<ResolutionStep> steps;
};

/// Line format, one step per line: `INIT i` or `RES i j pivot`. `;` also
/// separates steps so a refutation fits on one line.
ResolutionRefutation parse_refutation(std::string_view text);
std::string print_refutation(const ResolutionRefutation& r, char separator = '\n');

struct ResolutionCheck {
  bool ok = false;
  std::string diagnostic;  // first failing step when !ok
};

/// Every step well formed and the last clause empty.
ResolutionCheck check_resolution(const Cnf& cnf, const ResolutionRefutation& r);

/// Tree-like refutation read off a branching search, or nullopt when the CNF
/// is satisfiable or the node limit is hit.
std::optional<ResolutionRefutation> find_refutation(const Cnf& cnf, std::size_t node_limit = 1u << 20);

/// Pigeonhole clauses: p_{i,h} = pigeon i sits in hole h.
Cnf php_cnf(std::size_t pigeons, std::size_t holes);

/// tseitin(¬φ); it has a refutation exactly when φ is a tautology.
Cnf negation_cnf(const PropFormula& phi);

// ------------------------------------------------------------ proof systems

/// A checker maps every string to the statement it proves. Strings that are
/// not proofs map to the system's default statement so the map is total.
struct ProofSystem {
  enum class Domain { Taut, Sat };
  std::string name;
  Domain domain = Domain::Taut;
  std::function<PropFormula(const std::string& proof)> check;
  PropFormula default_statement;
};

/// Proofs `RES:<φ>:<refutation of tseitin(¬φ)>` and `TAUT:<φ>:<truth table>`.
ProofSystem resolution_proof_system();
/// Proofs `TT:<φ>:<truth table>` only.
ProofSystem truth_table_proof_system();

/// Truth table of φ over variables 1..max_var as '0'/'1', assignment bits
/// read MSB-first from x1. At most 16 variables.
std::string truth_table_string(const PropFormula& phi);
bool is_tautology(const PropFormula& phi);

struct SimulationRecord {
  std::string name;
  ProofSystem source, target;
  PolyBound length;  // |t(d)| <= length(|d|)
  std::function<std::string(const std::string& proof)> translate;
};

/// Truth-table proofs become truth-table escapes of the Resolution system.
SimulationRecord truth_table_to_resolution();

struct SimulationCheck {
  bool pass = true;
  std::vector<std::string> failures;
};
/// Per proof: target(t(d)) = source(d) and |t(d)| <= length(|d|).
SimulationCheck check_simulation(const SimulationRecord& rec, const std::vector<std::string>& proofs);

// ------------------------------------------------------------ NP pairs

/// x is in member i iff some y with |y| <= bound_i(|x|) has relation_i(x, y).
/// `decide`, when set, is an exact shortcut used instead of the sweep.
struct DisjointNPPair {
  std::string name;
  std::array<PolyBound, 2> bound;
  std::array<std::function<bool(const BitString& x, const BitString& y)>, 2> relation;
  std::function<bool(const BitString& x, int member)> decide;
};

bool np_witness(const DisjointNPPair& pair, int member, const BitString& x, const BitString& y);
/// Membership by sweeping every y up to the bound. ResourceLimit past max_bits.
bool np_member(const DisjointNPPair& pair, int member, const BitString& x, std::size_t max_bits = core::kSweepBits);

struct PairReduction {
  std::string name;
  std::function<BitString(const BitString&)> f;
};
PairReduction compose(const PairReduction& first, const PairReduction& second);

struct PairReductionReport {
  bool pass = true;
  std::size_t checked = 0;
  std::optional<BitString> counterexample;
};
/// x in member i of source implies f(x) in member i of target, deciding
/// membership by sweeps.
PairReductionReport check_np_pair_reduction(const PairReduction& red, const DisjointNPPair& source,
                                            const DisjointNPPair& target, const std::vector<BitString>& domain);

/// Instance (φ, 1^m): the bytes of φ's text and m in unary.
BitString np_pair_instance(const PropFormula& phi, std::size_t m);
std::optional<std::pair<PropFormula, std::size_t>> decode_np_pair_instance(const BitString& x);

/// Member 0: a proof of φ with at most m characters (witness = its bytes).
/// Member 1: an assignment to x1..x_maxvar falsifying φ.
DisjointNPPair canonical_np_pair(const ProofSystem& p);

/// (φ, 1^m) -> (φ, 1^{length(m)}). Malformed instances pass unchanged.
PairReduction lift_simulation_to_pair_reduction(const SimulationRecord& rec);

/// ({x even}, {x odd}) with empty witnesses.
DisjointNPPair even_odd_np_pair();
/// ({x < 2^(n-1)}, {x >= 2^(n-1)}) for |x| = n >= 1, empty witnesses.
DisjointNPPair high_bit_np_pair();

struct NpPairEntry {
  std::string name;
  DisjointNPPair pair;
  std::string cert;
};

class NpPairRegistry {
 public:
  /// Throws InputError when the certificate does not validate.
  void admit(NpPairEntry e);
  const NpPairEntry* find(const std::string& name) const;
  const std::vector<NpPairEntry>& entries() const { return entries_; }
  static std::string certify(const std::string& name, const DisjointNPPair& pair);

 private:
  std::vector<NpPairEntry> entries_;
};

NpPairRegistry default_np_pair_registry();

/// Instances encode(x, name, cert, 1^{b(|x|)}) with b the larger bound;
/// member i iff certified and x is in member i of the named pair. Anything
/// else lies in neither member.
DisjointNPPair universal_disjoint_np_pair(std::shared_ptr<const NpPairRegistry> registry);
PairReduction embed_np_pair(std::shared_ptr<const NpPairRegistry> registry, const std::string& name);

// ------------------------------------------------------------ coNP pairs

/// x is in member i iff every y with |y| <= bound_i(|x|) has beta_i(x, y).
/// `decide`, when set, is an exact shortcut used instead of the sweep.
struct DisjointCoNPPair {
  std::string name;
  std::array<PolyBound, 2> bound;
  std::array<std::function<bool(const BitString& x, const BitString& y)>, 2> beta;
  std::function<bool(const BitString& x, int member)> decide;
};

bool conp_member(const DisjointCoNPPair& pair, int member, const BitString& x,
                 std::size_t max_bits = core::kSweepBits);

/// (x, C) as encode(x, bytes of C's text).
BitString conp_instance(const BitString& x, const circuit::Circuit& c);

/// Pair of a padded problem P with bound p: (x, C) is in A_i iff C has p(|x|)
/// inputs and every witness y of x has C(y) = i. Wrong widths and malformed
/// instances are in neither member.
DisjointCoNPPair canonical_conp_pair(const TFNPProblem& padded);

enum class Membership { A0, A1, Neither, Both };
Membership conp_membership(const DisjointCoNPPair& pair, const BitString& x);

/// ({x even}, {x odd}) as coNP sets with empty universal quantifier.
DisjointCoNPPair parity_conp_pair();

struct ConpCanonicalization {
  TFNPProblem problem;       // counterexample search: z = i · pad(y)
  PairReduction reduction;   // x -> (x, NOT z_0)
  std::function<circuit::Circuit(std::size_t n)> circuit;
};

/// Search problem R(x, z) with z = i followed by y padded to r(|x|)+1 bits
/// and not beta_i(x, y). The enumerator throws TotalityViolation when x is in
/// both members.
ConpCanonicalization conp_pair_to_canonical(const DisjointCoNPPair& b);

struct ConpReductionReport {
  bool pass = true;
  std::size_t checked = 0;
  std::optional<BitString> counterexample;
};
/// x in member j of source implies f(x) in member j of target.
ConpReductionReport check_conp_pair_reduction(const PairReduction& red, const DisjointCoNPPair& source,
                                              const DisjointCoNPPair& target, const std::vector<BitString>& domain);

/// Lifts a reduction from P to Q to the canonical pairs of their padded
/// forms: (x, C) -> (f(x), C∘G_x) where G_x is g compiled at fixed x.
/// Malformed instances map to "0". Requires red.g_program.
PairReduction lift_tfnp_reduction_to_conp_pairs(const core::ManyOneReduction& red, const TFNPProblem& p,
                                                const TFNPProblem& q, std::size_t gate_cap = std::size_t{1} << 20);

/// Circuits on `width` inputs reading at most six of them, seeded.
std::vector<circuit::Circuit> conp_circuit_battery(std::size_t width, std::uint64_t seed = 0);

// ------------------------------------------------------------ SAT systems

/// Proofs `SAT:<φ>:<assignment bits>`; the default statement is x1.
ProofSystem standard_sat_system();
/// Also accepts the bare text of γ_n when n is composite.
ProofSystem composite_sat_system();

/// "n is composite": a, b of width max(1, bits(n)) with a >= 2, b >= 2 and
/// a·b = n, Tseitin encoded. Variables 1..2w are a and b interleaved.
PropFormula gamma_formula(std::uint64_t n);
/// The clauses of γ_n; gamma_formula is their conjunction.
Cnf gamma_cnf(std::uint64_t n);
/// n when φ is exactly some γ_n.
std::optional<std::uint64_t> gamma_parameter(const PropFormula& phi);
bool is_composite(std::uint64_t n);

}  // namespace tfnp::pairs
