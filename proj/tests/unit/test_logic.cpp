#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "acceptance.hpp"
#include "tfnp/error.hpp"
#include "tfnp/logic.hpp"

#include "json.hpp"

using namespace tfnp::logic;

TEST_CASE("signature parsing") {
  auto sig = Signature::parse("c/0 f/1 g/2", "R/2 P/1");
  CHECK(sig.function_arity("g") == 2u);
  CHECK(sig.relation_arity("P") == 1u);
  CHECK_FALSE(sig.function_arity("R").has_value());
  CHECK_THROWS(Signature::parse("c/0 c/1", "").validate());
  CHECK_THROWS(Signature::parse("f/1", "P/1").validate());
  CHECK_THROWS(Signature::parse("c", ""));
}

TEST_CASE("Herbrand term counts follow the recurrence") {
  // With constants a, b, unary f and binary g: T(0) = 2, T(d) = 2 + T(d-1) + T(d-1)^2.
  auto sig = Signature::parse("a/0 b/0 f/1 g/2", "P/1");
  std::size_t t = 2;
  for (std::size_t d = 0; d <= 2; ++d) {
    auto terms = enumerate_herbrand_terms(sig, d);
    CHECK(terms.size() == t);
    for (const auto& term : terms) {
      CHECK(term.ground());
      CHECK(term.depth() <= d);
    }
    t = 2 + t + t * t;
  }
}

TEST_CASE("sentence parsing and printing") {
  auto sig = Signature::parse("c/0 f/1", "R/2");
  auto s = parse_sentence("forall x,y. R(x,f(y)) -> ~R(f(x),c) | R(c,c)", sig);
  CHECK(s.variables == std::vector<std::string>{"x", "y"});
  CHECK(s.matrix.kind == Formula::Kind::Implies);
  CHECK(parse_sentence(s.to_string(), sig) == s);
  CHECK_THROWS(parse_sentence("forall x. R(x)", sig));         // arity
  CHECK_THROWS(parse_sentence("forall x. Q(x,x)", sig));       // undeclared
  CHECK_THROWS(parse_sentence("forall x. R(x,z)", sig));       // free name
  auto file = parse_sentence_file("# comment\nfunctions: c/0 f/1\nrelations: R/2\nforall x. R(x,f(x))\n");
  CHECK(parse_sentence_file(print_sentence_file(file)) == file);
}

TEST_CASE("Herbrand expansion shares atoms and evaluates like the ground formula") {
  auto sig = Signature::parse("c/0 f/1", "P/1");
  auto s = parse_sentence("forall x. P(x) -> P(f(x))", sig);
  std::vector<std::vector<Term>> tuples = {{parse_ground_term("c", sig)}, {parse_ground_term("f(c)", sig)}};
  auto g = herbrand_expand(s, tuples);
  CHECK(g.instances.size() == 2);
  CHECK(g.atoms.size() == 3);  // P(c), P(f(c)), P(f(f(c)))
  for (unsigned w = 0; w < 8; ++w) {
    std::vector<bool> bits(3);
    std::map<std::string, bool> by_name;
    for (std::size_t i = 0; i < 3; ++i) {
      bits[i] = (w >> i) & 1;
      by_name[g.atoms[i].to_string()] = bits[i];
    }
    bool expect = true;
    for (const auto& inst : g.instances) expect = expect && evaluate_ground(inst, by_name);
    CHECK(g.evaluate(bits) == expect);
  }
  CHECK_THROWS_AS(g.evaluate({true}), tfnp::InputError);
  CHECK(herbrand_expand(s, {}).atoms.empty());
}

TEST_CASE("binary numerals evaluate to their value") {
  for (std::uint64_t n : {0ull, 1ull, 2ull, 5ull, 64ull, 1000ull, 65535ull}) CHECK(evaluate_arithmetic(binary_numeral(n)) == n);
  CHECK_THROWS_AS(evaluate_arithmetic(Term::app("q")), tfnp::InputError);
}

TEST_CASE("padding adds falsum conjuncts") {
  auto phi = Formula::atom("P", {Term::app("c")});
  auto padded = pad_sentence(phi, 3);
  CHECK(padded.kind == Formula::Kind::Or);
  CHECK(padded.size() > phi.size());
  std::map<std::string, bool> v = {{"P(c)", true}};
  CHECK(evaluate_ground(padded, v));
  v["P(c)"] = false;
  CHECK_FALSE(evaluate_ground(padded, v));
  CHECK_THROWS(pad_sentence(phi, 0));
}

TEST_CASE("JSON round trip") {
  auto s = parse_sentence_file("functions: c/0 f/1\nrelations: R/2\nforall x. R(x,f(x)) & ~R(c,x)\n");
  CHECK(sentence_from_json(to_json(s)) == s);
  CHECK(sentence_from_json(nlohmann::json::parse(to_json(s).dump())) == s);
}

TEST_CASE("generated sentences are consistent with a small expansion") {
  for (const auto& g : tfnp::acceptance::generate_consistent_sentences(5, 20, 3)) {
    auto e = herbrand_expand(g.sentence, g.tuples);
    CHECK(e.atoms.size() <= 20);
    CHECK(tfnp::prop::sat_solve(tfnp::prop::tseitin(e.propositional).cnf).satisfiable);
  }
}
