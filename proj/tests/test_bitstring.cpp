#include <set>

#include "certlearn/bitstring.hpp"
#include "certlearn/errors.hpp"
#include "certlearn/rng.hpp"
#include "doctest.h"

using namespace certlearn;

TEST_CASE("lex_rank examples") {
  CHECK(lex_rank(BitString::from_string("00")) == 1);
  CHECK(lex_rank(BitString::from_string("01")) == 2);
  CHECK(lex_rank(BitString::from_string("11")) == 4);
}

TEST_CASE("lex_rank is a bijection onto [1, 2^p] for p <= 12") {
  for (std::size_t p = 1; p <= 12; ++p) {
    std::set<std::uint64_t> ranks;
    // Enumerate strings character by character, independent of from_uint.
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << p); ++v) {
      std::string s;
      for (std::size_t b = 0; b < p; ++b) s.push_back(((v >> (p - 1 - b)) & 1) ? '1' : '0');
      const auto w = BitString::from_string(s);
      const auto r = lex_rank(w);
      CHECK(r >= 1);
      CHECK(r <= (std::uint64_t{1} << p));
      ranks.insert(r);
      CHECK(string_of_rank(r, p) == w);
    }
    CHECK(ranks.size() == (std::size_t{1} << p));
  }
}

TEST_CASE("ordering is lexicographic for equal lengths") {
  CHECK(BitString::from_string("0111") < BitString::from_string("1000"));
  CHECK(BitString::from_string("10") < BitString::from_string("11"));
  Rng rng(7);
  for (int t = 0; t < 500; ++t) {
    const auto a = rng.bits(100);
    const auto b = rng.bits(100);
    CHECK((a < b) == (a.to_string() < b.to_string()));
    CHECK((a == b) == (a.to_string() == b.to_string()));
  }
}

TEST_CASE("append, slice and read_uint agree with the character view") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    const auto a = rng.bits(rng.below(150));
    const auto b = rng.bits(rng.below(150));
    const auto ab = concat(a, b);
    CHECK(ab.to_string() == a.to_string() + b.to_string());
    if (ab.size() == 0) continue;
    const std::size_t pos = rng.below(ab.size());
    const std::size_t len = rng.below(ab.size() - pos + 1);
    CHECK(ab.slice(pos, len).to_string() == ab.to_string().substr(pos, len));
    const std::size_t width = std::min<std::size_t>(len, 64);
    std::uint64_t expect = 0;
    for (std::size_t i = 0; i < width; ++i) expect = (expect << 1) | (ab[pos + i] ? 1 : 0);
    CHECK(ab.read_uint(pos, width) == expect);
  }
}

TEST_CASE("hex digest and popcount") {
  const auto w = BitString::from_string("101011110");
  CHECK(w.to_hex() == "15e");
  CHECK(w.popcount() == 6);
  CHECK(hamming_distance(w, BitString(9)) == 6);
}

TEST_CASE("shape errors") {
  BitString w(4);
  CHECK_THROWS_AS(w.at(4), ShapeError);
  CHECK_THROWS_AS(w.slice(2, 3), ShapeError);
  CHECK_THROWS_AS(hamming_distance(w, BitString(5)), ShapeError);
  CHECK_THROWS_AS(BitString::from_string("01x"), ParseError);
  CHECK_THROWS_AS(BitString::from_uint(4, 2), ShapeError);
}

TEST_CASE("rng streams are deterministic and derived seeds differ") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.below(1000) == b.below(1000));
  CHECK(Rng::derive(1, 0) != Rng::derive(1, 1));
  CHECK(Rng::derive(1, 0) == Rng::derive(1, 0));
}
