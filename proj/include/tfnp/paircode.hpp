#pragma once

#include "tfnp/bits.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tfnp {

// Self-delimiting tuple code. Each part x is written as
//
//   doubled(len(x)) · 01 · x
//
// where doubled() writes the minimal binary form of |x| (a single 0 for the
// empty part) with every bit repeated twice. The empty tuple encodes to ε.
// Length-field leading zeros are rejected so that the code is a bijection
// between tuples and the strings that decode successfully.

BitString encode_tuple(std::span<const BitString> parts);
inline BitString encode_tuple(std::initializer_list<BitString> parts) {
  std::vector<BitString> v(parts);
  return encode_tuple(v);
}

/// Decodes exactly `arity` parts consuming the whole string. A failed decode
/// is an ordinary outcome (nullopt), never an exception.
std::optional<std::vector<BitString>> decode_tuple(const BitString& u, std::size_t arity);

/// Upper bound on |encode_tuple(parts)| in terms of the total payload.
std::size_t tuple_code_bound(std::size_t total_payload, std::size_t parts);

}  // namespace tfnp
