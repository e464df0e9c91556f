#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace certlearn {

/// Fixed-length sequence of bits, indexed MSB-first.
///
/// Bit 0 is the most significant (leftmost) bit, so the natural ordering of
/// equal-length strings is the lexicographic one used for certificate ranks.
/// Storage packs bits into 64-bit words; bits past `size()` are always zero.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size, bool value = false);

  /// Parses a string of '0'/'1' characters.
  static BitString from_string(std::string_view bits);
  /// The `width` low bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t width);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (63 - (i & 63))) & 1U;
  }
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  /// Appends the bits of `other` after the last bit.
  BitString& append(const BitString& other);
  /// Appends the `width` low bits of `value`, most significant first.
  BitString& append_uint(std::uint64_t value, std::size_t width);
  void push_back(bool bit);

  BitString slice(std::size_t pos, std::size_t len) const;
  /// Reads `width` (<= 64) bits starting at `pos` as an unsigned integer.
  std::uint64_t read_uint(std::size_t pos, std::size_t width) const;
  /// Whole string as an integer; requires size() <= 64.
  std::uint64_t to_uint() const;

  std::size_t popcount() const noexcept;
  BitString operator^(const BitString& other) const;
  bool is_zero() const noexcept;

  std::string to_string() const;
  /// Hex digest, MSB-first, left-padded to a whole number of nibbles.
  std::string to_hex() const;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const BitString&, const BitString&) = default;
  /// Shorter strings order first; equal lengths compare lexicographically.
  friend std::strong_ordering operator<=>(const BitString& a,
                                          const BitString& b) noexcept;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

std::size_t hamming_distance(const BitString& a, const BitString& b);

/// Concatenation `(a, b)`.
BitString concat(const BitString& a, const BitString& b);

/// 1-indexed position of `w` among all strings of its length in
/// lexicographic order: integer value plus one.
std::uint64_t lex_rank(const BitString& w);

/// Inverse of lex_rank for strings of length `width`.
BitString string_of_rank(std::uint64_t rank, std::size_t width);

struct BitStringHash {
  std::size_t operator()(const BitString& s) const noexcept;
};

}  // namespace certlearn
