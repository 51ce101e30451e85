#include "tfnp/paircode.hpp"

namespace tfnp {

BitString encode_tuple(std::span<const BitString> parts) {
  BitString out;
  for (const auto& part : parts) {
    BitString len = part.empty() ? BitString{0} : BitString::from_uint(part.size());
    for (std::size_t i = 0; i < len.size(); ++i) {
      out.push_back(len[i]);
      out.push_back(len[i]);
    }
    out.push_back(false);
    out.push_back(true);
    out.append(part);
  }
  return out;
}

std::optional<std::vector<BitString>> decode_tuple(const BitString& u, std::size_t arity) {
  std::vector<BitString> parts;
  parts.reserve(arity);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < arity; ++k) {
    std::uint64_t len = 0;
    std::size_t digits = 0;
    bool first_digit = false;
    while (true) {
      if (pos + 2 > u.size()) return std::nullopt;
      bool a = u[pos], b = u[pos + 1];
      pos += 2;
      if (a == b) {
        if (digits == 0) first_digit = a;
        else if (!first_digit) return std::nullopt;  // "0" must stand alone
        if (digits >= 40) return std::nullopt;
        len = (len << 1) | static_cast<std::uint64_t>(a);
        ++digits;
      } else if (!a && b) {
        break;
      } else {
        return std::nullopt;
      }
    }
    if (digits == 0) return std::nullopt;
    if (pos + len > u.size()) return std::nullopt;
    parts.push_back(u.slice(pos, len));
    pos += len;
  }
  if (pos != u.size()) return std::nullopt;
  return parts;
}

std::size_t tuple_code_bound(std::size_t total_payload, std::size_t parts) {
  std::size_t digits = std::max<std::size_t>(1, bit_length(total_payload));
  return total_payload + parts * (2 * digits + 2);
}

}  // namespace tfnp
