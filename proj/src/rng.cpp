#include "certlearn/rng.hpp"

#include "certlearn/errors.hpp"

namespace certlearn {

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("Rng::below requires a positive bound");
  if ((bound & (bound - 1)) == 0) return next() & (bound - 1);
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % bound;
}

double Rng::unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

BitString Rng::bits(std::size_t width) {
  BitString out;
  while (width > 0) {
    const std::size_t take = width < 64 ? width : 64;
    const std::uint64_t v = next();
    out.append_uint(take == 64 ? v : (v >> (64 - take)), take);
    width -= take;
  }
  return out;
}

}  // namespace certlearn
