#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tfnp/error.hpp"
#include "tfnp/pairs.hpp"

using namespace tfnp;
using namespace tfnp::pairs;
using prop::parse_formula;
using prop::print_formula;

TEST_CASE("PHP(2,1) refutation by hand") {
  auto cnf = php_cnf(2, 1);
  REQUIRE(cnf.clauses.size() == 3);
  auto r = parse_refutation("INIT 0; INIT 2; RES 0 1 1; INIT 1; RES 3 2 2");
  auto chk = check_resolution(cnf, r);
  CHECK(chk.ok);
  CHECK(parse_refutation(print_refutation(r)).steps.size() == 5);
  // Missing final step: the last clause is not empty.
  auto partial = parse_refutation("INIT 0; INIT 2; RES 0 1 1");
  CHECK_FALSE(check_resolution(cnf, partial).ok);
  // Forward reference and bad clause index.
  CHECK_FALSE(check_resolution(cnf, parse_refutation("RES 1 2 1; INIT 0; INIT 1")).ok);
  CHECK_FALSE(check_resolution(cnf, parse_refutation("INIT 7")).ok);
  CHECK_THROWS(parse_refutation("RESOLVE 1 2"));
}

TEST_CASE("search finds refutations exactly for unsatisfiable CNFs") {
  for (std::size_t p = 2; p <= 4; ++p) {
    auto unsat = php_cnf(p, p - 1);
    auto r = find_refutation(unsat);
    REQUIRE(r.has_value());
    CHECK(check_resolution(unsat, *r).ok);
    CHECK_FALSE(find_refutation(php_cnf(p, p)).has_value());
  }
}

TEST_CASE("tautology check against a direct truth table") {
  CHECK(is_tautology(parse_formula("x1 | ~x1")));
  CHECK_FALSE(is_tautology(parse_formula("x1 | x2")));
  // (x1 & x2) -> x1 written with | and ~
  CHECK(is_tautology(parse_formula("~(x1 & x2) | x1")));
  CHECK(truth_table_string(parse_formula("x1 & ~x2")) == "0010");
}

TEST_CASE("Resolution proof system maps non-proofs to the default") {
  auto sys = resolution_proof_system();
  auto phi = parse_formula("x1 | ~x1");
  auto ref = find_refutation(negation_cnf(phi));
  REQUIRE(ref.has_value());
  auto text = print_formula(phi);
  CHECK(sys.check("RES:" + text + ":" + print_refutation(*ref, ';')) == phi);
  CHECK(sys.check("garbage") == sys.default_statement);
  auto non_taut = parse_formula("x1 | x2");
  CHECK(sys.check("TAUT:" + print_formula(non_taut) + ":" + truth_table_string(non_taut)) == sys.default_statement);
  CHECK(is_tautology(sys.default_statement));
}

TEST_CASE("truth-table simulation") {
  auto rec = truth_table_to_resolution();
  std::vector<std::string> proofs = {"TT:x1 | ~x1:11", "TT:x1:01", "junk"};
  auto phi = parse_formula("~(x1 & x2) | x2 | x1");
  proofs.push_back("TT:" + print_formula(phi) + ":" + truth_table_string(phi));
  CHECK(check_simulation(rec, proofs).pass);
}

TEST_CASE("canonical NP pair of Resolution") {
  auto pair = canonical_np_pair(resolution_proof_system());
  auto phi = parse_formula("x1 & x2");
  auto x = np_pair_instance(phi, 4);
  auto decoded = decode_np_pair_instance(x);
  REQUIRE(decoded.has_value());
  CHECK(decoded->first == phi);
  CHECK(decoded->second == 4);
  // Falsifying assignment 01 puts the instance in member 1.
  CHECK(np_witness(pair, 1, x, BitString{0, 1}));
  CHECK_FALSE(np_witness(pair, 1, x, BitString{1, 1}));
  CHECK(np_member(pair, 1, x));
}

TEST_CASE("NP pair reductions and the universal pair") {
  auto eo = even_odd_np_pair();
  PairReduction keep{"id", [](const BitString& x) { return x; }};
  std::vector<BitString> domain = core::strings_up_to(5);
  CHECK(check_np_pair_reduction(keep, eo, eo, domain).pass);
  PairReduction flip{"flip", [](const BitString& x) {
                       auto y = x;
                       if (!y.empty()) y.set(y.size() - 1, !y[y.size() - 1]);
                       return y;
                     }};
  auto bad = check_np_pair_reduction(flip, eo, eo, domain);
  CHECK_FALSE(bad.pass);
  CHECK(bad.counterexample.has_value());

  auto reg = std::make_shared<const NpPairRegistry>(default_np_pair_registry());
  auto u = universal_disjoint_np_pair(reg);
  REQUIRE(reg->find(eo.name) != nullptr);
  CHECK(check_np_pair_reduction(embed_np_pair(reg, eo.name), eo, u, core::strings_up_to(3)).pass);
  NpPairRegistry r;
  CHECK_THROWS_AS(r.admit({"forged", eo, "00"}), InputError);
}

TEST_CASE("canonical coNP pair membership") {
  auto fact = core::normalize_padding(core::factoring_problem());
  auto pair = canonical_conp_pair(fact);
  auto x = BitString::from_uint(6);  // witnesses 2 and 3, padded to width 4
  circuit::Builder b;
  auto zero = b.finish({b.constant(false)}, 4);
  circuit::Builder b1;
  // Witnesses 10, 11, 010, 011 pad to 1010, 1110, 0101, 0111.
  auto low = b1.finish({b1.lor(b1.input(0), b1.input(1))}, 4);
  circuit::Builder b2;
  auto mid = b2.finish({b2.input(1)}, 4);
  CHECK(conp_membership(pair, conp_instance(x, zero)) == Membership::A0);
  CHECK(conp_membership(pair, conp_instance(x, low)) == Membership::A1);
  CHECK(conp_membership(pair, conp_instance(x, mid)) == Membership::Neither);
  circuit::Builder b3;
  auto wrong_width = b3.finish({b3.constant(false)}, 3);
  CHECK(conp_membership(pair, conp_instance(x, wrong_width)) == Membership::Neither);
  CHECK(conp_membership(pair, BitString{1, 0}) == Membership::Neither);
}

TEST_CASE("coNP pair canonicalisation") {
  auto parity = parity_conp_pair();
  auto canon = conp_pair_to_canonical(parity);
  auto target = canonical_conp_pair(canon.problem);  // witnesses already have fixed width
  auto rep = check_conp_pair_reduction(canon.reduction, parity, target, core::strings_up_to(4));
  CHECK(rep.pass);
  CHECK(rep.checked > 0);
}

TEST_CASE("lifting the identity reduction") {
  auto fact = core::factoring_problem();
  auto h = lift_tfnp_reduction_to_conp_pairs(core::identity_reduction(), fact, fact);
  auto padded = core::normalize_padding(fact);
  auto pair = canonical_conp_pair(padded);
  for (std::uint64_t n = 2; n <= 12; ++n) {
    auto x = BitString::from_uint(n);
    for (const auto& c : conp_circuit_battery(padded.bound(x.size()), 3)) {
      auto inst = conp_instance(x, c);
      auto m = conp_membership(pair, inst);
      if (m == Membership::A0 || m == Membership::A1) CHECK(conp_membership(pair, h.f(inst)) == m);
    }
  }
  CHECK(h.f(BitString{1, 1}) == BitString{0});
}

TEST_CASE("gamma formulas encode compositeness") {
  for (std::uint64_t n = 0; n <= 60; ++n) {
    bool comp = false;
    for (std::uint64_t a = 2; a * a <= n; ++a) comp |= n % a == 0;
    CHECK(is_composite(n) == comp);
    CHECK(prop::sat_solve(gamma_cnf(n)).satisfiable == comp);
    CHECK(gamma_parameter(gamma_formula(n)) == n);
  }
  CHECK_FALSE(gamma_parameter(parse_formula("x1 & x2")).has_value());
  auto sys = composite_sat_system();
  CHECK(sys.check(print_formula(gamma_formula(15))) == gamma_formula(15));
  CHECK(sys.check(print_formula(gamma_formula(13))) == sys.default_statement);
  auto std_sys = standard_sat_system();
  CHECK(std_sys.check("SAT:x1 & ~x2:10") == parse_formula("x1 & ~x2"));
  CHECK(std_sys.check("SAT:x1 & ~x2:11") == std_sys.default_statement);
}
