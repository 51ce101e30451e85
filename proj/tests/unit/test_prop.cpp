#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tfnp/error.hpp"
#include "tfnp/prop.hpp"

#include <cstdlib>
#include <random>

using namespace tfnp::prop;

namespace {

// Independent clause evaluator over an assignment packed into a word.
bool cnf_holds(const Cnf& cnf, std::uint32_t bits) {
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (int lit : c) {
      const bool v = (bits >> (std::abs(lit) - 1)) & 1;
      sat |= lit > 0 ? v : !v;
    }
    if (!sat) return false;
  }
  return true;
}

Cnf random_cnf(std::mt19937& rng, std::size_t vars, std::size_t clauses) {
  Cnf cnf;
  cnf.num_vars = vars;
  for (std::size_t i = 0; i < clauses; ++i) {
    std::vector<int> c;
    for (int k = 0; k < 3; ++k) {
      int v = 1 + static_cast<int>(rng() % vars);
      bool clash = false;
      for (int l : c) clash |= std::abs(l) == v;
      if (!clash) c.push_back(rng() % 2 ? v : -v);
    }
    cnf.clauses.push_back(c);
  }
  return cnf;
}

PropFormula random_formula(std::mt19937& rng, int depth, std::uint32_t vars) {
  if (depth == 0 || rng() % 5 == 0) return PropFormula::variable(1 + rng() % vars);
  switch (rng() % 3) {
    case 0: return PropFormula::negation(random_formula(rng, depth - 1, vars));
    case 1: return PropFormula::conjunction({random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars)});
    default: return PropFormula::disjunction({random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars)});
  }
}

Assignment from_word(std::uint32_t bits, std::size_t n) {
  Assignment a(n);
  for (std::size_t i = 0; i < n; ++i) a.set(static_cast<std::uint32_t>(i + 1), (bits >> i) & 1);
  return a;
}

}  // namespace

TEST_CASE("parse and print") {
  auto f = parse_formula("x1 & ~x2 | (x3 | F) & T");
  CHECK(f.kind == PropFormula::Kind::Or);
  CHECK(parse_formula(print_formula(f)) == f);
  CHECK(f.max_var() == 3);
  CHECK_THROWS(parse_formula("x1 &"));
  CHECK_THROWS(parse_formula("x0"));
  CHECK_THROWS(parse_formula("(x1"));
}

TEST_CASE("evaluate follows the truth tables") {
  auto f = parse_formula("(x1 | x2) & ~(x1 & x2)");
  for (std::uint32_t w = 0; w < 4; ++w) CHECK(evaluate(f, from_word(w, 2)) == (((w & 1) ^ (w >> 1)) != 0));
  CHECK_THROWS_AS(evaluate(parse_formula("x3"), Assignment(2)), tfnp::InputError);
}

TEST_CASE("DPLL agrees with exhaustive search on random 3-CNF") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    auto cnf = random_cnf(rng, n, 2 + rng() % (5 * n));
    bool expect = false;
    for (std::uint32_t w = 0; w < (1u << n) && !expect; ++w) expect = cnf_holds(cnf, w);
    auto res = sat_solve(cnf);
    REQUIRE(res.satisfiable == expect);
    if (res.satisfiable) CHECK(cnf.satisfied_by(res.model));
  }
}

TEST_CASE("Tseitin preserves the model set on original variables") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 120; ++trial) {
    auto f = random_formula(rng, 4, 1 + rng() % 5);
    const std::uint32_t n = f.max_var();
    auto t = tseitin(f);
    std::vector<Assignment> expect;
    for (std::uint32_t w = 0; w < (1u << n); ++w) {
      auto a = from_word(w, n);
      if (evaluate(f, a)) expect.push_back(a);
    }
    std::sort(expect.begin(), expect.end());
    CHECK(sat_enumerate(t.cnf, n, 1u << n) == expect);
    CHECK(brute_force_sat(f, n).has_value() == !expect.empty());
  }
}

TEST_CASE("sat_enumerate enforces its limit") {
  Cnf free_vars;
  free_vars.num_vars = 4;
  CHECK(sat_enumerate(free_vars, 4, 16).size() == 16);
  CHECK_THROWS_AS(sat_enumerate(free_vars, 4, 15), tfnp::ResourceLimit);
}

TEST_CASE("DIMACS round trip and normalisation") {
  std::mt19937 rng(2);
  auto cnf = random_cnf(rng, 6, 10);
  CHECK(from_dimacs(to_dimacs(cnf)) == cnf);
  auto parsed = from_dimacs("c comment\np cnf 3 3\n1 1 -2 0\n2 -2 0\n-3 0\n");
  CHECK(parsed.num_vars == 3);
  REQUIRE(parsed.clauses.size() == 2);
  CHECK(parsed.clauses[0] == std::vector<int>{1, -2});
  CHECK_THROWS(from_dimacs("p cnf 2 1\n3 0\n"));
}

TEST_CASE("cnf_to_formula is equivalent to the CNF") {
  std::mt19937 rng(9);
  auto cnf = random_cnf(rng, 5, 8);
  auto f = cnf_to_formula(cnf);
  for (std::uint32_t w = 0; w < 32; ++w) CHECK(evaluate(f, from_word(w, 5)) == cnf_holds(cnf, w));
}
