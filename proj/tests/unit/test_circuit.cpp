#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tfnp/circuit.hpp"
#include "tfnp/error.hpp"


using namespace tfnp;
using namespace tfnp::circuit;

namespace {

// Adds two w-bit numbers (MSB-first inputs a then b); w+1 output bits.
Circuit adder(std::size_t w) {
  Builder b;
  std::vector<Wire> sum(w + 1);
  Wire carry = b.constant(false);
  for (std::size_t i = w; i-- > 0;) {
    Wire x = b.input(i), y = b.input(w + i);
    sum[i + 1] = b.lxor(b.lxor(x, y), carry);
    carry = b.lor(b.land(x, y), b.land(carry, b.lxor(x, y)));
  }
  sum[0] = carry;
  return b.finish(sum, 2 * w);
}

}  // namespace

TEST_CASE("builder adder matches integer addition") {
  const std::size_t w = 4;
  auto c = adder(w);
  CHECK(c.input_width() == 2 * w);
  auto table = truth_table(c);
  REQUIRE(table.size() == 256);
  for (std::uint64_t in = 0; in < 256; ++in) CHECK(table[in].to_uint() == (in >> w) + (in & 15));
}

TEST_CASE("lane evaluation agrees with scalar evaluation") {
  auto c = adder(3);
  std::vector<std::uint64_t> lanes(6, 0);
  for (std::uint64_t l = 0; l < 64; ++l)
    for (std::size_t i = 0; i < 6; ++i)
      if ((l >> (5 - i)) & 1) lanes[i] |= std::uint64_t{1} << l;
  auto words = eval_lanes(c, lanes);
  for (std::uint64_t l = 0; l < 64; ++l) {
    auto out = eval(c, BitString::from_uint(l, 6));
    for (std::size_t k = 0; k < out.size(); ++k) CHECK(out[k] == (((words[k] >> l) & 1) != 0));
  }
}

TEST_CASE("text round trip and validation") {
  auto c = adder(2);
  CHECK(Circuit::parse(c.to_text()) == c);
  CHECK_THROWS(Circuit::parse("INPUT 0\nAND 0 5\nOUTPUT 1\n"));
  CHECK_THROWS(Circuit::parse("FROB 1\n"));
  CHECK_THROWS_AS(eval(c, BitString{1}), InputError);
  Circuit empty;
  CHECK(eval(empty, BitString{}).empty());
}

TEST_CASE("builder folds constants and respects its cap") {
  Builder b;
  Wire x = b.input(0);
  CHECK(b.const_value(b.land(x, b.constant(false))) == false);
  CHECK(b.const_value(b.lor(x, b.lnot(x))) == true);
  CHECK(b.land(x, x) == x);
  Builder tiny(3);
  Wire p = tiny.input(0), q = tiny.input(1);
  tiny.land(p, q);
  CHECK_THROWS_AS(tiny.lor(tiny.lnot(p), q), ResourceLimit);
}

TEST_CASE("oracle gates receive queries and answers") {
  Builder b;
  Wire o = b.oracle({b.input(0), b.input(1)}, 2);
  auto c = b.finish({b.answer(o, 1), b.answer(o, 0)}, 2);
  CHECK(c.has_oracle());
  CHECK_THROWS_AS(eval(c, BitString{0, 1}), InputError);
  auto run = eval_oracle_circuit(c, BitString{0, 1}, [](const BitString& q) { return BitString{q[1], 0}; });
  CHECK(run.outputs == BitString{0, 1});
  REQUIRE(run.calls.size() == 1);
  CHECK(run.calls[0].first == BitString{0, 1});
  CHECK_THROWS_AS(eval_oracle_circuit(c, BitString{0, 1}, [](const BitString&) { return BitString{1}; }), InputError);
}

TEST_CASE("composition evaluates outer after inner") {
  // inner: 4 -> 3 (sum of 2-bit numbers), outer: 3 -> 1 (parity).
  auto inner = adder(2);
  Builder ob;
  auto outer = ob.finish({ob.lxor(ob.lxor(ob.input(0), ob.input(1)), ob.input(2))}, 3);
  auto both = compose(outer, inner);
  for (std::uint64_t z = 0; z < 16; ++z) {
    auto in = BitString::from_uint(z, 4);
    CHECK(eval(both, in) == eval(outer, eval(inner, in)));
  }
  CHECK_THROWS_AS(compose(inner, outer), InputError);
}
