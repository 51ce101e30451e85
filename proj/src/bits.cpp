#include "tfnp/bits.hpp"

#include "tfnp/error.hpp"

#include <algorithm>

namespace tfnp {

BitString::BitString(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) bits_.push_back(b ? 1 : 0);
}

BitString BitString::parse(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c != '0' && c != '1') throw InputError("bit string may only contain 0 and 1: '" + std::string(text) + "'");
    out.bits_.push_back(c == '1');
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value) { return from_uint(value, bit_length(value)); }

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
  BitString out;
  out.bits_.resize(width);
  for (std::size_t i = 0; i < width; ++i) {
    std::size_t shift = width - 1 - i;
    out.bits_[i] = shift < 64 ? (value >> shift) & 1u : 0;
  }
  return out;
}

BitString BitString::from_bytes(std::string_view bytes) {
  BitString out;
  out.bits_.reserve(bytes.size() * 8);
  for (unsigned char c : bytes)
    for (int i = 7; i >= 0; --i) out.bits_.push_back((c >> i) & 1u);
  return out;
}

BitString BitString::ones(std::size_t n) { return BitString(std::vector<std::uint8_t>(n, 1)); }
BitString BitString::zeros(std::size_t n) { return BitString(std::vector<std::uint8_t>(n, 0)); }

void BitString::append(const BitString& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  pos = std::min(pos, bits_.size());
  len = std::min(len, bits_.size() - pos);
  return BitString(std::vector<std::uint8_t>(bits_.begin() + pos, bits_.begin() + pos + len));
}

std::uint64_t BitString::to_uint() const {
  std::uint64_t v = 0;
  for (auto b : bits_) {
    if (v >> 63) throw InputError("bit string value exceeds 64 bits");
    v = (v << 1) | b;
  }
  return v;
}

std::optional<std::string> BitString::to_bytes() const {
  if (bits_.size() % 8 != 0) return std::nullopt;
  std::string out(bits_.size() / 8, '\0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out[i / 8] = static_cast<char>(out[i / 8] | (0x80 >> (i % 8)));
  return out;
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s = std::to_string(bits_.size()) + ":";
  for (std::size_t i = 0; i < bits_.size(); i += 4) {
    unsigned nib = 0;
    for (std::size_t j = 0; j < 4; ++j) nib = (nib << 1) | (i + j < bits_.size() ? bits_[i + j] : 0);
    s.push_back(digits[nib]);
  }
  return s;
}

BitString BitString::from_hex(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) throw InputError("hex bit string must look like <length>:<hex>");
  std::size_t len = 0;
  for (char c : text.substr(0, colon)) {
    if (c < '0' || c > '9') throw InputError("bad length in hex bit string");
    len = len * 10 + static_cast<std::size_t>(c - '0');
  }
  auto hex = text.substr(colon + 1);
  if (hex.size() != (len + 3) / 4) throw InputError("hex digit count does not match declared length");
  BitString out;
  for (char c : hex) {
    int nib;
    if (c >= '0' && c <= '9') nib = c - '0';
    else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
    else throw InputError("bad hex digit in bit string");
    for (int j = 3; j >= 0; --j) out.bits_.push_back((nib >> j) & 1);
  }
  for (std::size_t i = len; i < out.bits_.size(); ++i)
    if (out.bits_[i]) throw InputError("nonzero padding in hex bit string");
  out.bits_.resize(len);
  return out;
}

std::strong_ordering BitString::operator<=>(const BitString& other) const {
  if (auto c = bits_.size() <=> other.bits_.size(); c != 0) return c;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (auto c = bits_[i] <=> other.bits_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

BitString next_length_lex(const BitString& s) {
  auto bits = s.raw();
  for (std::size_t i = bits.size(); i-- > 0;) {
    if (bits[i] == 0) {
      bits[i] = 1;
      return BitString(std::move(bits));
    }
    bits[i] = 0;
  }
  return BitString::zeros(s.size() + 1);
}

std::size_t bit_length(std::uint64_t n) {
  std::size_t k = 0;
  while (n) {
    ++k;
    n >>= 1;
  }
  return k;
}

BitString pad_to_width(const BitString& y, std::size_t width) {
  if (y.size() >= width) throw InputError("pad_to_width: witness of length " + std::to_string(y.size()) +
                                          " does not fit width " + std::to_string(width));
  BitString out = y;
  out.push_back(true);
  while (out.size() < width) out.push_back(false);
  return out;
}

std::optional<BitString> unpad(const BitString& padded) {
  for (std::size_t i = padded.size(); i-- > 0;)
    if (padded[i]) return padded.slice(0, i);
  return std::nullopt;
}

}  // namespace tfnp
