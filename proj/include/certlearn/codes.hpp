#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "certlearn/bitstring.hpp"

namespace certlearn {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Shape of the concatenated code used for one message length.
///
/// Outer: systematic Reed-Solomon over GF(16), evaluated at field elements
/// 0..N-1, dimension k = ceil(m / 4). Inner: each outer symbol becomes an
/// L-bit block, either the [8,4,4] extended Hamming code or the [16,4,8]
/// Hadamard code. Codeword length N * L equals c * m exactly.
struct CodeConstruction {
  std::size_t message_len = 0;
  std::size_t inner_len = 0;
  std::size_t inner_distance = 0;
  std::size_t outer_len = 0;
  std::size_t outer_dim = 0;

  std::size_t inner_radius() const { return (inner_distance - 1) / 2; }
  std::size_t outer_radius() const { return (outer_len - outer_dim) / 2; }
  /// Errors always corrected by inner nearest-codeword then outer
  /// Berlekamp-Welch: fooling the outer decoder takes more than
  /// outer_radius() wrong blocks, each needing more than inner_radius() flips.
  std::size_t guaranteed_radius() const {
    return (outer_radius() + 1) * (inner_radius() + 1) - 1;
  }
};

/// Binary code with rate 1/c correcting an eps_star fraction of adversarial
/// errors. Only c = 8 is implemented; any eps_star in (0, 1/16] is accepted.
struct CodeParams {
  std::size_t c = 8;
  Rational eps_star{1, 16};

  static CodeParams defaults() { return {}; }

  /// Throws ConfigError for parameters the construction cannot honor.
  void validate() const;
  bool supports(std::size_t message_len) const;
  /// Supported message lengths in increasing order.
  std::vector<std::size_t> supported_lengths() const;
  std::size_t codeword_length(std::size_t message_len) const { return c * message_len; }
  /// floor(eps_star * c * m): the radius every caller may rely on.
  std::size_t contract_radius(std::size_t message_len) const;
  /// The radius the construction actually proves (>= contract_radius).
  std::size_t guaranteed_radius(std::size_t message_len) const;
  CodeConstruction construction(std::size_t message_len) const;
};

struct Codeword {
  BitString bits;
  std::size_t source_len = 0;
};

/// Throws ConfigError if |x| is not a supported message length.
Codeword encode(const CodeParams& params, const BitString& x);

/// Recovers x whenever y is within contract_radius(m) of encode(x). Inputs
/// farther from the code decode to some message without error. Throws
/// ShapeError if |y| is not c * m for a supported m.
BitString decode(const CodeParams& params, const BitString& y);

/// y with exactly the listed positions flipped (duplicates flip once).
BitString corrupt(const BitString& y, std::span<const std::size_t> positions);

}  // namespace certlearn
