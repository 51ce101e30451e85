#pragma once

// Many-one and Turing reductions between total search problems, the
// problem transformations (padding, flattening, completion) and the
// registry-based universal problem.

#include "tfnp/problem.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tfnp::core {

/// S(f(x), z) implies R(x, g(x, z)).
struct ManyOneReduction {
  std::string name;
  std::function<BitString(const BitString& x)> f;
  std::function<BitString(const BitString& x, const BitString& z)> g;
  /// Bytecode for g on (x, z) with a tape output, when one exists. Needed
  /// to lift the reduction to coNP pairs.
  std::optional<vm::Program> g_program;
};

using Solver = std::function<BitString(const BitString& instance)>;

ManyOneReduction identity_reduction();
/// Negative control: g drops the last bit of z.
ManyOneReduction broken_reduction();
/// red2 after red1: P -> Q -> S.
ManyOneReduction compose(const ManyOneReduction& red1, const ManyOneReduction& red2);

/// g(x, S_solver(f(x))); throws ReductionUnsound when it fails R.
BitString apply_many_one(const ManyOneReduction& red, const TFNPProblem& target, const Solver& s_solver,
                         const TFNPProblem& source, const BitString& x);

struct WitnessCheck {
  BitString z;   // a witness of f(x)
  BitString y;   // g(x, z)
  bool ok = false;
};

struct ReductionCase {
  BitString x, fx;
  std::vector<WitnessCheck> checks;
  bool pass = true;
  std::string error;  // set when the case could not be evaluated
};

struct ReductionReport {
  std::string reduction;
  std::vector<ReductionCase> cases;
  bool pass = true;
  /// First failing (x, z, g(x,z)) if any.
  std::optional<std::tuple<BitString, BitString, BitString>> counterexample;
};

/// Checks the contract for every witness z of f(x), for every x in domain.
/// ResourceLimit from the witness enumeration propagates.
ReductionReport check_many_one(const ManyOneReduction& red, const TFNPProblem& source, const TFNPProblem& target,
                               const std::vector<BitString>& domain);

/// Worked reduction PIGEON[f] -> HCS(php_sentence()).
ManyOneReduction pigeon_to_hcs_reduction(const PigeonFamily& family);
/// The HCS instance f produces for r, as term tuples.
std::vector<std::vector<logic::Term>> pigeon_hcs_tuples(const PigeonMap& map, const BitString& r);

// ------------------------------------------------------------ transforms

/// Witnesses become pad_to_width(y, p(n)+1); bound p+1.
TFNPProblem normalize_padding(const TFNPProblem& p);

/// Relation R(x, y, z) with separate bounds on y and z.
struct NPMVFunction {
  std::string name;
  MachinePtr relation;  // arity 3
  PolyBound ybound, zbound;
};

/// Witness u = encode(y, z) with R(x, y, z). Malformed u rejects.
TFNPProblem flatten_np_relation(const NPMVFunction& r);
inline TFNPProblem npmv_to_tfnp(const NPMVFunction& g) { return flatten_np_relation(g); }
/// f{x} = { y : some z has R(x, y, z) } by exhaustive search.
std::vector<BitString> npmv_values(const NPMVFunction& g, const BitString& x, std::size_t max_bits = kSweepBits);

struct NpmvCase {
  BitString x, hx;
  std::vector<BitString> f_values, g_values;
  bool equal = false;
};
struct NpmvReport {
  std::vector<NpmvCase> cases;
  bool pass = true;
};
/// PASS iff f{x} = g{h(x)} as sets on the whole domain.
NpmvReport check_npmv_reduction(const NPMVFunction& f, const NPMVFunction& g,
                                const std::function<BitString(const BitString&)>& h,
                                const std::vector<BitString>& domain);

NPMVFunction divisor_npmv();
NPMVFunction all_divisors_npmv();

// ------------------------------------------------------------ completion

/// Instance for the completed problem: encode(x, bytes of circuit text).
BitString completion_instance(const BitString& x, const circuit::Circuit& c);

/// P': instances (x, C) with C an oracle circuit on |x| inputs whose
/// oracle gates answer P queries in padded form of width p(q)+1. The
/// witness v has one bit per gate and must be a consistent evaluation in
/// which every oracle answer unpads to a valid P witness. Malformed
/// instances accept every v. Bound p'(n) = n.
TFNPProblem wrap_completion(const TFNPProblem& p);

/// Gate values of C on x answering every oracle call with `solver`.
BitString transcript(const circuit::Circuit& c, const BitString& x, const TFNPProblem& p, const Solver& solver);

/// Oracle program solving Q with an oracle for P.
struct TuringReduction {
  std::string name;
  vm::Program program;  // arity 1, tape output
  TFNPProblem source;   // Q
  TFNPProblem oracle;   // P
};

/// Runs the oracle program with P answered by `solver`.
BitString run_turing(const TuringReduction& t, const BitString& x, const Solver& solver);

/// Many-one reduction from Q to wrap_completion(P). Circuits are compiled
/// once per input width with the given gate cap.
ManyOneReduction turing_to_many_one(const TuringReduction& t, std::size_t gate_cap = std::size_t{1} << 20);
/// The compiled oracle circuit used for inputs of width n.
circuit::Circuit turing_circuit(const TuringReduction& t, std::size_t n, std::size_t gate_cap = std::size_t{1} << 20);

TuringReduction succ_once_reduction();    // SUCC with one SUCC query
TuringReduction succ_twice_reduction();   // PLUS2 with two adaptive SUCC queries
TuringReduction succ_direct_reduction();  // SUCC with no queries
TuringReduction factoring_once_reduction();

// ------------------------------------------------------------ universal

/// Keyed FNV-1a certificate over (name, bound); stands in for a totality
/// proof in some theory.
std::string certificate(const std::string& name, const PolyBound& bound, const std::string& key = "tfnp-registry");

struct RegistryEntry {
  std::string name;
  TFNPProblem problem;
  std::string cert;
  std::vector<BitString> test_domain;
};

class Registry {
 public:
  explicit Registry(std::string key = "tfnp-registry") : key_(std::move(key)) {}
  /// Throws InputError when the certificate does not validate.
  void admit(RegistryEntry e);
  bool valid(const std::string& name, const std::string& cert) const;
  const RegistryEntry* find(const std::string& name) const;
  const std::vector<RegistryEntry>& entries() const { return entries_; }

 private:
  std::string key_;
  std::vector<RegistryEntry> entries_;
};

/// Registry of the shipped problems with their test domains.
Registry default_registry();

/// U: instances encode(x', name, cert, 1^{p_name(|x'|)}); for a valid
/// instance v must be a witness of x' for the named problem, otherwise any v
/// is accepted. Bound p(n) = n.
TFNPProblem universal_problem(std::shared_ptr<const Registry> registry);
BitString embed(const Registry& registry, const std::string& name, const BitString& x);
ManyOneReduction embed_reduction(std::shared_ptr<const Registry> registry, const std::string& name);

}  // namespace tfnp::core
