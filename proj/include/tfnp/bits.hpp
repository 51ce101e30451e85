#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tfnp {

/// A finite string over {0,1}. Instances, witnesses, proofs and encoded
/// objects are all carried as BitStrings.
///
/// Numbers are read MSB-first; the empty string denotes 0 and leading zeros
/// are permitted (they change the length but not the value).
class BitString {
 public:
  BitString() = default;
  BitString(std::initializer_list<int> bits);
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  /// Parses "0101". Throws InputError on other characters.
  static BitString parse(std::string_view text);
  /// Minimal binary representation; 0 maps to the empty string.
  static BitString from_uint(std::uint64_t value);
  /// Exactly `width` bits, MSB first, value truncated to its low bits.
  static BitString from_uint(std::uint64_t value, std::size_t width);
  /// Eight bits per byte, MSB first.
  static BitString from_bytes(std::string_view bytes);
  static BitString ones(std::size_t n);
  static BitString zeros(std::size_t n);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool b) { bits_[i] = b ? 1 : 0; }
  void push_back(bool b) { bits_.push_back(b ? 1 : 0); }
  void append(const BitString& other);
  BitString slice(std::size_t pos, std::size_t len) const;

  /// Value of the string read as an MSB-first binary number. Throws
  /// InputError when the value does not fit in 64 bits.
  std::uint64_t to_uint() const;
  /// True when the string is the minimal representation of its value.
  bool is_canonical_number() const { return bits_.empty() || bits_[0] != 0; }
  /// Inverse of from_bytes; nullopt when the length is not a multiple of 8.
  std::optional<std::string> to_bytes() const;

  std::string to_string() const;
  /// Hex form "<length>:<hex digits>"; the length prefix keeps it exact.
  std::string to_hex() const;
  static BitString from_hex(std::string_view text);

  const std::vector<std::uint8_t>& raw() const { return bits_; }

  bool operator==(const BitString&) const = default;
  /// Length-lexicographic order: shorter strings first, then lexicographic.
  std::strong_ordering operator<=>(const BitString& other) const;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Successor in length-lexicographic order (ε, 0, 1, 00, 01, ...).
BitString next_length_lex(const BitString& s);

/// Number of bits of the minimal representation; bit_length(0) == 0.
std::size_t bit_length(std::uint64_t n);

/// Pad codec used for fixed-width witnesses: y ↦ y·1·0^k of exactly
/// `width` bits. Requires |y| < width.
BitString pad_to_width(const BitString& y, std::size_t width);
/// Inverse of pad_to_width; nullopt when the string contains no 1 bit.
std::optional<BitString> unpad(const BitString& padded);

}  // namespace tfnp
