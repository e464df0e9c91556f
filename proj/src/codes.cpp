#include "certlearn/codes.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "certlearn/errors.hpp"

namespace certlearn {

namespace {

// GF(16) with modulus x^4 + x + 1.
class Gf16 {
 public:
  static const Gf16& instance() {
    static const Gf16 field;
    return field;
  }

  static std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return table_[a][b]; }
  std::uint8_t inv(std::uint8_t a) const { return exp_[15 - log_[a]]; }
  std::uint8_t pow(std::uint8_t a, std::size_t e) const {
    std::uint8_t out = 1;
    for (std::size_t i = 0; i < e; ++i) out = mul(out, a);
    return out;
  }

 private:
  Gf16() {
    std::uint8_t x = 1;
    for (int i = 0; i < 15; ++i) {
      exp_[i] = x;
      exp_[i + 15] = x;
      log_[x] = static_cast<std::uint8_t>(i);
      x = static_cast<std::uint8_t>(x << 1);
      if (x & 0x10) x ^= 0x13;
    }
    for (int a = 1; a < 16; ++a) {
      for (int b = 1; b < 16; ++b) table_[a][b] = exp_[log_[a] + log_[b]];
    }
  }

  std::array<std::uint8_t, 30> exp_{};
  std::array<std::uint8_t, 16> log_{};
  std::array<std::array<std::uint8_t, 16>, 16> table_{};
};

// Outer symbols never exceed 16 per codeword.
constexpr std::size_t kMaxSymbols = 16;
using Symbols = std::array<std::uint8_t, kMaxSymbols>;

// Inner codes map a 4-bit symbol to an L-bit block. Position x of the block
// (MSB first) carries <symbol, x> for Hadamard, and for extended Hamming the
// top symbol bit is an affine offset added to <low 3 bits, x>.
std::uint32_t inner_encode(std::size_t inner_len, std::uint8_t symbol) {
  std::uint32_t block = 0;
  for (std::uint32_t x = 0; x < inner_len; ++x) {
    unsigned bit = 0;
    if (inner_len == 8) {
      bit = ((symbol >> 3) & 1U) ^ (std::popcount(static_cast<unsigned>(symbol & 7U) & x) & 1U);
    } else {
      bit = std::popcount(static_cast<unsigned>(symbol) & x) & 1U;
    }
    block = (block << 1) | bit;
  }
  return block;
}

// Nearest symbol for every received block; ties go to the smaller symbol.
const std::vector<std::uint8_t>& inner_table(std::size_t inner_len) {
  static const auto build = [](std::size_t len) {
    std::array<std::uint32_t, 16> codewords{};
    for (std::uint8_t s = 0; s < 16; ++s) codewords[s] = inner_encode(len, s);
    std::vector<std::uint8_t> table(std::size_t{1} << len);
    for (std::uint32_t r = 0; r < table.size(); ++r) {
      int best = 1 << 20;
      for (std::uint8_t s = 0; s < 16; ++s) {
        const int d = std::popcount(r ^ codewords[s]);
        if (d < best) {
          best = d;
          table[r] = s;
        }
      }
    }
    return table;
  };
  static const std::vector<std::uint8_t> table8 = build(8);
  if (inner_len == 8) return table8;
  static const std::vector<std::uint8_t> table16 = build(16);
  return table16;
}

// Systematic Reed-Solomon code over GF(16) at evaluation points 0..N-1.
class ReedSolomon {
 public:
  ReedSolomon(std::size_t n, std::size_t k) : n_(n), k_(k), generator_(n * k) {
    const auto& f = Gf16::instance();
    // generator_[j][t] = Lagrange basis polynomial of point t evaluated at j.
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t t = 0; t < k_; ++t) {
        std::uint8_t num = 1;
        std::uint8_t den = 1;
        for (std::size_t s = 0; s < k_; ++s) {
          if (s == t) continue;
          num = f.mul(num, point(j) ^ point(s));
          den = f.mul(den, point(t) ^ point(s));
        }
        generator_[j * k_ + t] = f.mul(num, f.inv(den));
      }
    }
  }

  Symbols encode(const Symbols& message) const {
    const auto& f = Gf16::instance();
    Symbols out{};
    for (std::size_t j = 0; j < n_; ++j) {
      std::uint8_t acc = 0;
      for (std::size_t t = 0; t < k_; ++t) acc ^= f.mul(generator_[j * k_ + t], message[t]);
      out[j] = acc;
    }
    return out;
  }

  // Message symbols of the codeword within (n - k) / 2 symbol errors of
  // `received`; otherwise the received systematic symbols unchanged.
  Symbols decode(const Symbols& received) const {
    Symbols out = received;
    if (is_consistent(received)) return out;
    berlekamp_welch(received, out);
    return out;
  }

 private:
  static std::uint8_t point(std::size_t j) { return static_cast<std::uint8_t>(j); }

  bool is_consistent(const Symbols& received) const {
    const auto& f = Gf16::instance();
    for (std::size_t j = k_; j < n_; ++j) {
      std::uint8_t acc = 0;
      for (std::size_t t = 0; t < k_; ++t) acc ^= f.mul(generator_[j * k_ + t], received[t]);
      if (acc != received[j]) return false;
    }
    return true;
  }

  // Writes the corrected message symbols into `out` and returns true, or
  // leaves `out` alone when no codeword lies within (n - k) / 2 errors.
  bool berlekamp_welch(const Symbols& r, Symbols& out) const {
    const auto& f = Gf16::instance();
    const std::size_t e = (n_ - k_) / 2;
    if (e == 0) return false;
    // Unknowns: E_0..E_{e-1} (E monic of degree e), then Q_0..Q_{e+k-1}.
    // Row j: sum Q_i a^i + r_j sum E_i a^i = r_j a^e (characteristic 2).
    const std::size_t cols = 2 * e + k_;
    std::array<std::array<std::uint8_t, kMaxSymbols + 1>, kMaxSymbols> rows{};
    for (std::size_t j = 0; j < n_; ++j) {
      const std::uint8_t a = point(j);
      std::uint8_t power = 1;
      for (std::size_t i = 0; i < e + k_; ++i) {
        if (i < e) rows[j][i] = f.mul(r[j], power);
        rows[j][e + i] = power;
        if (i == e) rows[j][cols] = f.mul(r[j], power);
        power = f.mul(power, a);
      }
    }
    std::array<std::size_t, kMaxSymbols> pivot_col{};
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < n_; ++col) {
      std::size_t pivot = rank;
      while (pivot < n_ && rows[pivot][col] == 0) ++pivot;
      if (pivot == n_) continue;
      std::swap(rows[pivot], rows[rank]);
      const std::uint8_t scale = f.inv(rows[rank][col]);
      for (std::size_t c = col; c <= cols; ++c) rows[rank][c] = f.mul(rows[rank][c], scale);
      for (std::size_t other = 0; other < n_; ++other) {
        if (other == rank || rows[other][col] == 0) continue;
        const std::uint8_t factor = rows[other][col];
        for (std::size_t c = col; c <= cols; ++c) rows[other][c] ^= f.mul(factor, rows[rank][c]);
      }
      pivot_col[rank] = col;
      ++rank;
    }
    for (std::size_t j = rank; j < n_; ++j) {
      if (rows[j][cols] != 0) return false;
    }
    std::array<std::uint8_t, kMaxSymbols> solution{};  // free variables set to 0
    for (std::size_t i = 0; i < rank; ++i) solution[pivot_col[i]] = rows[i][cols];

    std::array<std::uint8_t, kMaxSymbols + 1> locator{};
    for (std::size_t i = 0; i < e; ++i) locator[i] = solution[i];
    locator[e] = 1;
    std::array<std::uint8_t, kMaxSymbols> q{};
    for (std::size_t i = 0; i < e + k_; ++i) q[i] = solution[e + i];
    // Long division q / locator; the locator is monic.
    std::array<std::uint8_t, kMaxSymbols> quotient{};
    for (std::size_t deg = e + k_; deg-- > e;) {
      const std::uint8_t coef = q[deg];
      if (coef == 0) continue;
      const std::size_t shift = deg - e;
      quotient[shift] = coef;
      for (std::size_t i = 0; i <= e; ++i) q[shift + i] ^= f.mul(coef, locator[i]);
    }
    for (std::size_t i = 0; i < e; ++i) {
      if (q[i] != 0) return false;
    }
    std::size_t disagreements = 0;
    Symbols values{};
    for (std::size_t j = 0; j < n_; ++j) {
      std::uint8_t acc = 0;
      for (std::size_t i = k_; i-- > 0;) acc = f.mul(acc, point(j)) ^ quotient[i];
      values[j] = acc;
      if (acc != r[j]) ++disagreements;
    }
    if (disagreements > e) return false;
    for (std::size_t i = 0; i < k_; ++i) out[i] = values[i];
    return true;
  }

  std::size_t n_;
  std::size_t k_;
  std::vector<std::uint8_t> generator_;
};

std::optional<CodeConstruction> construction_for(std::size_t m) {
  CodeConstruction out;
  out.message_len = m;
  out.outer_dim = (m + 3) / 4;
  if (m >= 1 && m <= 16) {
    out.inner_len = 8;
    out.inner_distance = 4;
    out.outer_len = m;
  } else if (m > 16 && m <= 32 && m % 2 == 0) {
    out.inner_len = 16;
    out.inner_distance = 8;
    out.outer_len = m / 2;
  } else {
    return std::nullopt;
  }
  return out;
}

const ReedSolomon& outer_code(const CodeConstruction& shape) {
  // One instance per (N, k); N <= 16, k <= 8.
  static const auto codes = [] {
    std::vector<std::vector<std::optional<ReedSolomon>>> all(17);
    for (std::size_t n = 1; n <= 16; ++n) {
      all[n].resize(n + 1);
      for (std::size_t k = 1; k <= n; ++k) all[n][k].emplace(n, k);
    }
    return all;
  }();
  return *codes[shape.outer_len][shape.outer_dim];
}

}  // namespace

void CodeParams::validate() const {
  if (c != 8) throw ConfigError("only rate 1/8 (c = 8) is implemented");
  if (eps_star.den <= 0 || eps_star.num <= 0 || 16 * eps_star.num > eps_star.den) {
    throw ConfigError("eps_star must lie in (0, 1/16]");
  }
  if (supported_lengths().empty()) throw ConfigError("eps_star too small to correct any error");
}

bool CodeParams::supports(std::size_t m) const {
  const auto shape = construction_for(m);
  if (!shape) return false;
  // At least one correctable error, and the construction covers the contract.
  return contract_radius(m) >= 1 && shape->guaranteed_radius() >= contract_radius(m);
}

std::vector<std::size_t> CodeParams::supported_lengths() const {
  std::vector<std::size_t> out;
  for (std::size_t m = 1; m <= 32; ++m) {
    if (supports(m)) out.push_back(m);
  }
  return out;
}

std::size_t CodeParams::contract_radius(std::size_t m) const {
  const auto num = static_cast<std::uint64_t>(eps_star.num) * c * m;
  return static_cast<std::size_t>(num / static_cast<std::uint64_t>(eps_star.den));
}

std::size_t CodeParams::guaranteed_radius(std::size_t m) const {
  return construction(m).guaranteed_radius();
}

CodeConstruction CodeParams::construction(std::size_t m) const {
  if (!supports(m)) {
    throw ConfigError("unsupported message length " + std::to_string(m));
  }
  return *construction_for(m);
}

Codeword encode(const CodeParams& params, const BitString& x) {
  const CodeConstruction shape = params.construction(x.size());
  Symbols message{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) message[i / 4] |= static_cast<std::uint8_t>(8U >> (i % 4));
  }
  const auto symbols = outer_code(shape).encode(message);
  Codeword out;
  out.source_len = x.size();
  for (std::size_t j = 0; j < shape.outer_len; ++j) {
    out.bits.append_uint(inner_encode(shape.inner_len, symbols[j]), shape.inner_len);
  }
  return out;
}

BitString decode(const CodeParams& params, const BitString& y) {
  if (y.size() % params.c != 0 || !params.supports(y.size() / params.c)) {
    throw ShapeError("received word length is not c * m for a supported m");
  }
  const CodeConstruction shape = *construction_for(y.size() / params.c);
  const auto& table = inner_table(shape.inner_len);
  Symbols received{};
  for (std::size_t j = 0; j < shape.outer_len; ++j) {
    received[j] = table[y.read_uint(j * shape.inner_len, shape.inner_len)];
  }
  const auto message = outer_code(shape).decode(received);
  BitString out(shape.message_len);
  for (std::size_t i = 0; i < shape.message_len; ++i) {
    if ((message[i / 4] >> (3 - i % 4)) & 1U) out.set(i, true);
  }
  return out;
}

BitString corrupt(const BitString& y, std::span<const std::size_t> positions) {
  std::vector<std::size_t> unique(positions.begin(), positions.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  BitString out = y;
  for (auto pos : unique) {
    if (pos >= y.size()) throw ShapeError("corruption index out of range");
    out.flip(pos);
  }
  return out;
}

}  // namespace certlearn
