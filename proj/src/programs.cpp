#include "tfnp/programs.hpp"

#include "tfnp/error.hpp"

#include <map>
#include <mutex>

namespace tfnp::programs {

namespace {

// Control flow in these programs depends only on input lengths, so the
// compiler keeps a constant program counter and circuits stay small.

const char* kEquality = R"(program equality
arity 2
registers 8
budget 8 1 16
  len r0 0
  len r1 1
  eq r2 r0 r1
  ldi r3 0
loop:
  lt r4 r3 r0
  jz r4 done
  ldb r5 0 r3
  ldb r6 1 r3
  eq r5 r5 r6
  and r2 r2 r5
  addi r3 r3 1
  jmp loop
done:
  halt r2
)";

const char* kXor2 = R"(program xor2
arity 1
registers 4
budget 1 0 16
  len r0 0
  ldi r1 2
  eq r1 r0 r1
  ldi r2 0
  ldb r2 0 r2
  ldi r3 1
  ldb r3 0 r3
  xor r2 r2 r3
  and r1 r1 r2
  halt r1
)";

const char* kParity = R"(program parity
arity 1
registers 4
budget 6 1 8
  len r0 0
  ldi r1 0
  ldi r2 0
loop:
  lt r3 r2 r0
  jz r3 done
  ldb r3 0 r2
  xor r1 r1 r3
  addi r2 r2 1
  jmp loop
done:
  halt r1
)";

const char* kConstAccept = R"(program const_accept
arity 1
registers 1
budget 1 0 1
  accept
)";

// Q(N, M): |M| <= |N| and (N < 2 or N prime or 1 < M < N with M | N).
// Primality by trial division over d = 2 .. 2^ceil(n/2). Inputs with
// |N| > 30 do not fit a word and are accepted outright.
const char* kFactoring = R"(program factoring
arity 2
registers 14
budget 16 3 512
  len r0 0
  len r1 1
  ldi r13 1
  ldi r2 30
  lt r2 r2 r0
  jnz r2 out
  ldi r2 0
  ldi r3 0
nl:
  lt r4 r3 r0
  jz r4 nd
  shl r2 r2 1
  ldb r5 0 r3
  or r2 r2 r5
  addi r3 r3 1
  jmp nl
nd:
  ldi r6 0
  ldi r3 0
ml:
  lt r4 r3 r1
  jz r4 md
  shl r6 r6 1
  ldb r5 1 r3
  or r6 r6 r5
  addi r3 r3 1
  jmp ml
md:
  lt r7 r0 r1
  lnot r7 r7          # |M| <= |N|
  ldi r5 2
  lt r8 r2 r5         # N < 2
  ldi r5 1
  lt r9 r5 r6         # 1 < M
  lt r4 r6 r2
  and r9 r9 r4        # M < N
  mod r4 r2 r6
  lnot r4 r4
  and r9 r9 r4        # M divides N
  addi r10 r0 1
  shr r10 r10 1       # ceil(n/2)
  ldi r11 1
  ldi r3 0
lm:
  lt r4 r3 r10
  jz r4 lg
  add r11 r11 r11
  addi r3 r3 1
  jmp lm
lg:
  ldi r12 0           # proper divisor seen
  ldi r3 2
tl:
  lt r4 r11 r3
  jnz r4 td
  lt r4 r3 r2
  mod r5 r2 r3
  lnot r5 r5
  and r4 r4 r5
  or r12 r12 r4
  addi r3 r3 1
  jmp tl
td:
  lnot r12 r12
  lnot r4 r8
  and r12 r12 r4      # prime
  or r13 r8 r9
  or r13 r13 r12
  and r13 r13 r7
out:
  halt r13
)";

// R(x, y, z): z empty, y canonical, |y| <= |x| and y is a proper divisor
// of x, or y = x when x is prime or below 2.
const char* kDivisorRelation = R"(program divisor_relation
arity 3
registers 16
budget 16 3 512
  len r0 0
  len r1 1
  len r14 2
  lnot r14 r14        # z empty
  mov r13 r14
  ldi r2 30
  lt r2 r2 r0
  jnz r2 out
  ldi r2 0
  ldi r3 0
nl:
  lt r4 r3 r0
  jz r4 nd
  shl r2 r2 1
  ldb r5 0 r3
  or r2 r2 r5
  addi r3 r3 1
  jmp nl
nd:
  ldi r6 0
  ldi r3 0
ml:
  lt r4 r3 r1
  jz r4 md
  shl r6 r6 1
  ldb r5 1 r3
  or r6 r6 r5
  addi r3 r3 1
  jmp ml
md:
  lt r7 r0 r1
  lnot r7 r7          # |y| <= |x|
  and r14 r14 r7
  ldi r3 0
  ldb r4 1 r3
  lnot r5 r1
  or r4 r4 r5         # y canonical
  and r14 r14 r4
  ldi r5 2
  lt r8 r2 r5         # x < 2
  ldi r5 1
  lt r9 r5 r6
  lt r4 r6 r2
  and r9 r9 r4
  mod r4 r2 r6
  lnot r4 r4
  and r9 r9 r4        # proper divisor
  addi r10 r0 1
  shr r10 r10 1
  ldi r11 1
  ldi r3 0
lm:
  lt r4 r3 r10
  jz r4 lg
  add r11 r11 r11
  addi r3 r3 1
  jmp lm
lg:
  ldi r12 0
  ldi r3 2
tl:
  lt r4 r11 r3
  jnz r4 td
  lt r4 r3 r2
  mod r5 r2 r3
  lnot r5 r5
  and r4 r4 r5
  or r12 r12 r4
  addi r3 r3 1
  jmp tl
td:
  lnot r12 r12
  lnot r4 r8
  and r12 r12 r4      # prime
  or r12 r12 r8
  eq r4 r6 r2
  and r12 r12 r4      # y = x, x prime or small
  or r13 r9 r12
  and r13 r13 r14
out:
  halt r13
)";

// Every divisor 1 <= y <= x; for x < 2 only y = x.
const char* kAllDivisors = R"(program all_divisors
arity 3
registers 12
budget 8 1 128
  len r0 0
  len r1 1
  len r10 2
  lnot r10 r10
  ldi r2 30
  lt r2 r2 r0
  jnz r2 out
  ldi r2 0
  ldi r3 0
nl:
  lt r4 r3 r0
  jz r4 nd
  shl r2 r2 1
  ldb r5 0 r3
  or r2 r2 r5
  addi r3 r3 1
  jmp nl
nd:
  ldi r6 0
  ldi r3 0
ml:
  lt r4 r3 r1
  jz r4 md
  shl r6 r6 1
  ldb r5 1 r3
  or r6 r6 r5
  addi r3 r3 1
  jmp ml
md:
  lt r7 r0 r1
  lnot r7 r7
  and r10 r10 r7
  ldi r3 0
  ldb r4 1 r3
  lnot r5 r1
  or r4 r4 r5
  and r10 r10 r4
  ldi r5 2
  lt r8 r2 r5
  eq r9 r6 r2
  and r9 r9 r8        # small x: y = x
  lnot r8 r8
  ldi r5 0
  lt r4 r5 r6
  and r8 r8 r4
  lt r4 r2 r6
  lnot r4 r4
  and r8 r8 r4
  mod r4 r2 r6
  lnot r4 r4
  and r8 r8 r4        # 1 <= y <= x, y | x
  or r9 r9 r8
  and r10 r10 r9
out:
  halt r10
)";

// g(x, z) = z for the universal problem embeddings.
const char* kCopyWitness = R"(program copy_witness
arity 2
registers 5
budget 8 1 8
  cap r0 1
  len r1 1
  ldi r2 0
loop:
  lt r3 r2 r0
  jz r3 done
  ldb r4 1 r2
  lt r3 r2 r1
  outif r3 r4
  addi r2 r2 1
  jmp loop
done:
  accept
)";

const char* kSuccTwice = R"(program succ_twice
arity 1
registers 6
budget 24 1 24
  cap r0 0
  ldi r1 0
q1:
  lt r2 r1 r0
  jz r2 a1
  ldb r3 0 r1
  qout r3
  addi r1 r1 1
  jmp q1
a1:
  query
  ldi r1 0
q2:
  lt r2 r1 r0
  jz r2 a2
  lda r3 r1
  qout r3
  addi r1 r1 1
  jmp q2
a2:
  query
  acap r0
  alen r4
  ldi r1 0
o:
  lt r2 r1 r0
  jz r2 done
  lda r3 r1
  lt r2 r1 r4
  outif r2 r3
  addi r1 r1 1
  jmp o
done:
  accept
)";

// x + 1 mod 2^|x| computed in a word, no oracle calls (|x| <= 30).
const char* kSuccDirect = R"(program succ_direct
arity 1
registers 6
budget 24 1 16
  len r0 0
  ldi r1 0
  ldi r2 0
rd:
  lt r3 r2 r0
  jz r3 inc
  shl r1 r1 1
  ldb r4 0 r2
  or r1 r1 r4
  addi r2 r2 1
  jmp rd
inc:
  addi r1 r1 1
  ldi r5 1
  ldi r2 0
mk:
  lt r3 r2 r0
  jz r3 emit
  shl r5 r5 1
  addi r2 r2 1
  jmp mk
emit:
  shr r5 r5 1
  ldi r2 0
em:
  lt r3 r2 r0
  jz r3 done
  and r4 r1 r5
  lnot r4 r4
  lnot r4 r4
  out r4
  shr r5 r5 1
  addi r2 r2 1
  jmp em
done:
  accept
)";

struct Catalog {
  std::map<std::string, std::string, std::less<>> sources;
  Catalog() {
    sources["equality"] = kEquality;
    sources["xor2"] = kXor2;
    sources["parity"] = kParity;
    sources["const_accept"] = kConstAccept;
    sources["factoring"] = kFactoring;
    sources["divisor_relation"] = kDivisorRelation;
    sources["copy_witness"] = kCopyWitness;
    sources["all_divisors"] = kAllDivisors;
    sources["succ"] = add_const_source("succ", 1);
    sources["plus2"] = add_const_source("plus2", 2);
    sources["succ_once"] = query_once_source("succ_once");
    sources["factoring_once"] = query_once_source("factoring_once");
    sources["succ_twice"] = kSuccTwice;
    sources["succ_direct"] = kSuccDirect;
  }
};

const Catalog& catalog() {
  static const Catalog c;
  return c;
}

}  // namespace

std::string add_const_source(const std::string& name, std::uint32_t k) {
  return "program " + name + R"(
arity 2
registers 10
budget 16 1 16
  len r0 0
  len r1 1
  eq r2 r0 r1
  ldi r3 )" + std::to_string(k) + R"(
  ldi r4 0
  mov r5 r0
loop:
  jz r5 done
  addi r5 r5 -1
  ldb r6 0 r5
  ldi r7 1
  and r7 r3 r7
  shr r3 r3 1
  xor r8 r6 r7
  xor r9 r8 r4
  and r7 r6 r7
  and r8 r8 r4
  or r4 r7 r8
  ldb r6 1 r5
  eq r6 r6 r9
  and r2 r2 r6
  jmp loop
done:
  halt r2
)";
}

std::string query_once_source(const std::string& name) {
  return "program " + name + R"(
arity 1
registers 6
budget 16 1 16
  cap r0 0
  ldi r1 0
q:
  lt r2 r1 r0
  jz r2 asked
  ldb r3 0 r1
  qout r3
  addi r1 r1 1
  jmp q
asked:
  query
  acap r0
  alen r4
  ldi r1 0
o:
  lt r2 r1 r0
  jz r2 done
  lda r3 r1
  lt r2 r1 r4
  outif r2 r3
  addi r1 r1 1
  jmp o
done:
  accept
)";
}

std::string truncate_source(const std::string& name, std::uint64_t c, std::uint64_t k, std::uint64_t d) {
  auto n = [](std::uint64_t v) { return std::to_string(v); };
  return "program " + name + "\narity 2\nregisters 8\nbudget " + n(8 * c + 8) + " " + n(std::max<std::uint64_t>(k, 1)) +
         " " + n(8 * d + 8 * k + 64) + R"(
  len r0 0
  ldi r1 )" + n(c) + R"(
  ldi r2 0
  ldi r5 )" + n(k) + R"(
pk:
  lt r3 r2 r5
  jz r3 pd
  mul r1 r1 r0
  addi r2 r2 1
  jmp pk
pd:
  addi r1 r1 )" + n(d) + R"(
  len r6 1
  ldi r2 0
loop:
  lt r3 r2 r1
  jz r3 done
  ldb r4 1 r2
  lt r3 r2 r6
  outif r3 r4
  addi r2 r2 1
  jmp loop
done:
  accept
)";
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : catalog().sources) out.push_back(k);
  return out;
}

const std::string& source(std::string_view name) {
  const auto& s = catalog().sources;
  auto it = s.find(name);
  if (it == s.end()) throw InputError("unknown program '" + std::string(name) + "'");
  return it->second;
}

vm::Program load(std::string_view name) { return vm::Program::assemble(source(name)); }

}  // namespace tfnp::programs
