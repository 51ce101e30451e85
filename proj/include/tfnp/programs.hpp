#pragma once

// Bytecode shipped with the library: verifiers, witness back-maps and the
// oracle programs used as toy Turing reductions.

#include "tfnp/vm.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tfnp::programs {

/// Names of every shipped program.
std::vector<std::string> names();
/// Assembly source of a shipped program. Throws InputError for unknown names.
const std::string& source(std::string_view name);
vm::Program load(std::string_view name);

/// Verifier for y = x + k mod 2^|x| with |y| = |x| (arity 2).
std::string add_const_source(const std::string& name, std::uint32_t k);
/// Oracle program: query the input once and output the answer (arity 1).
std::string query_once_source(const std::string& name);
/// g(x, z) = the first c·|x|^k + d bits of z.
std::string truncate_source(const std::string& name, std::uint64_t c, std::uint64_t k, std::uint64_t d);

}  // namespace tfnp::programs
