#include <set>
#include <sstream>

#include "certlearn/errors.hpp"
#include "certlearn/rng.hpp"
#include "certlearn/verifiers.hpp"
#include "doctest.h"

using namespace certlearn;

namespace {

ThreeSatInstance phi0() {
  // (x1 | x2) & (~x1 | x2)
  return {2, {{{1, true}, {2, true}}, {{1, false}, {2, true}}}};
}

ThreeSatInstance phi_unsat() { return {2, {{{1, true}}, {{1, false}}}}; }

const FormulaLayout kLayout = FormulaLayout::minimal(2, 3);

// Independent oracle: first accepted certificate by scanning strings built
// from characters.
std::optional<std::string> scan(const FunctionVerifier::Check& check, const BitString& z,
                                std::size_t p) {
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << p); ++v) {
    std::string s;
    for (std::size_t b = 0; b < p; ++b) s.push_back(((v >> (p - 1 - b)) & 1) ? '1' : '0');
    if (check(z, BitString::from_string(s))) return s;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("verify on 3-SAT") {
  ThreeSatVerifier v(kLayout);
  const auto z0 = v.encode(phi0());
  CHECK(verify(v, z0, BitString::from_string("01")));
  CHECK_FALSE(verify(v, z0, BitString::from_string("00")));
  const auto zu = v.encode(phi_unsat());
  for (const char* w : {"00", "01", "10", "11"}) {
    CHECK_FALSE(verify(v, zu, BitString::from_string(w)));
  }
  CHECK_THROWS_AS(verify(v, z0, BitString::from_string("0")), ShapeError);
  CHECK_THROWS_AS(verify(v, BitString(3), BitString(2)), ShapeError);
}

TEST_CASE("verify is deterministic and counts steps") {
  ThreeSatVerifier v(kLayout);
  const auto z0 = v.encode(phi0());
  StepCounter a;
  StepCounter b;
  CHECK(verify(v, z0, BitString::from_string("11"), &a) ==
        verify(v, z0, BitString::from_string("11"), &b));
  CHECK(a.verifier_steps == b.verifier_steps);
  CHECK(a.verifier_steps > 0);
}

TEST_CASE("lex_verify examples") {
  ThreeSatVerifier v(kLayout);
  const auto z0 = v.encode(phi0());
  CHECK(lex_verify(v, {z0, 4}, BitString::from_string("01")));
  CHECK_FALSE(lex_verify(v, {z0, 1}, BitString::from_string("01")));
  const auto zu = v.encode(phi_unsat());
  for (const char* w : {"00", "01", "10", "11"}) {
    CHECK_FALSE(lex_verify(v, {zu, 4}, BitString::from_string(w)));
  }
}

TEST_CASE("nondet and lex oracles") {
  ThreeSatVerifier v(kLayout);
  const auto z0 = v.encode(phi0());
  const auto zu = v.encode(phi_unsat());
  CHECK(nondet_oracle(v, z0));
  CHECK_FALSE(nondet_oracle(v, zu));
  CHECK(nondet_oracle(v, v.encode(ThreeSatInstance{2, {}})));
  CHECK(nondet_oracle(v, BitString(v.n())));  // all-zero string = empty formula

  CHECK_FALSE(lex_oracle(v, z0, 1));
  CHECK(lex_oracle(v, z0, 2));
  CHECK_FALSE(lex_oracle(v, zu, 4));
  CHECK_THROWS_AS(lex_oracle(v, z0, 0), ShapeError);
  CHECK_THROWS_AS(lex_oracle(v, z0, 5), ShapeError);
}

TEST_CASE("first_certificate examples") {
  ThreeSatVerifier v(kLayout);
  auto r0 = first_certificate(v, v.encode(phi0()));
  REQUIRE(r0.certificate);
  CHECK(r0.certificate->to_string() == "01");
  CHECK(r0.cost.oracle_calls <= v.p());

  CHECK_FALSE(first_certificate(v, v.encode(phi_unsat())).certificate);

  ThreeSatVerifier v1(FormulaLayout::minimal(1, 1));
  auto r1 = first_certificate(v1, v1.encode(ThreeSatInstance{1, {{{1, true}}}}));
  REQUIRE(r1.certificate);
  CHECK(r1.certificate->to_string() == "1");
}

TEST_CASE("budget is enforced before enumeration") {
  FunctionVerifier wide("wide", 1, 25, [](const BitString&, const BitString&) { return true; });
  CHECK_THROWS_AS(nondet_oracle(wide, BitString(1)), BudgetExceeded);
  CHECK_THROWS_AS(first_certificate(wide, BitString(1)), BudgetExceeded);
  CHECK(nondet_oracle(wide, BitString(1), OracleBudget{25}));
}

TEST_CASE("property: first_certificate matches an exhaustive scan, p <= 12") {
  Rng rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t p = 1 + rng.below(12);
    // Random sparse accept set; some instances get none.
    const double density = trial % 4 == 0 ? 0.0 : 1.0 / static_cast<double>(1 + rng.below(64));
    std::vector<bool> accepts(std::size_t{1} << p);
    for (std::size_t i = 0; i < accepts.size(); ++i) accepts[i] = rng.bernoulli(density);
    FunctionVerifier::Check check = [accepts](const BitString&, const BitString& w) {
      return static_cast<bool>(accepts[w.to_uint()]);
    };
    FunctionVerifier v("table", 3, p, check);
    const BitString z = rng.bits(3);
    const auto found = first_certificate(v, z);
    const auto expect = scan(check, z, p);
    CHECK(found.cost.oracle_calls <= p);
    REQUIRE(found.certificate.has_value() == expect.has_value());
    if (expect) CHECK(found.certificate->to_string() == *expect);
    CHECK(nondet_oracle(v, z) == expect.has_value());
    const auto scanned = scan_first_certificate(v, z);
    CHECK(scanned.certificate == found.certificate);
  }
}

TEST_CASE("property: lex_verify equals rank guard and verify, exhaustive p <= 8") {
  Rng rng(5);
  for (std::size_t p = 1; p <= 8; ++p) {
    std::vector<bool> accepts(std::size_t{1} << p);
    for (std::size_t i = 0; i < accepts.size(); ++i) accepts[i] = rng.bernoulli(0.3);
    FunctionVerifier v("table", 2, p, [accepts](const BitString&, const BitString& w) {
      return static_cast<bool>(accepts[w.to_uint()]);
    });
    const BitString z(2);
    const std::uint64_t total = std::uint64_t{1} << p;
    for (std::uint64_t k = 1; k <= total; ++k) {
      bool any = false;
      for (std::uint64_t value = 0; value < total; ++value) {
        const auto w = BitString::from_uint(value, p);
        const bool expect = value + 1 <= k && accepts[value];
        CHECK(lex_verify(v, {z, k}, w) == expect);
        any = any || expect;
      }
      CHECK(lex_oracle(v, z, k) == any);
    }
  }
}

TEST_CASE("3-SAT encoding round trip and injectivity on 2-variable formulas") {
  // All clauses over two variables: non-empty literal sets of size <= 3.
  std::vector<Clause> clauses;
  const Literal lits[] = {{1, false}, {1, true}, {2, false}, {2, true}};
  for (unsigned mask = 1; mask < 16; ++mask) {
    if (std::popcount(mask) > 3) continue;
    Clause c;
    for (unsigned b = 0; b < 4; ++b) {
      if (mask & (1U << b)) c.push_back(lits[b]);
    }
    clauses.push_back(c);
  }
  REQUIRE(clauses.size() == 14);
  std::set<std::string> seen;
  std::size_t count = 0;
  for (std::size_t a = 0; a <= clauses.size(); ++a) {
    for (std::size_t b = a; b <= clauses.size(); ++b) {
      ThreeSatInstance f{2, {}};
      if (a < clauses.size()) f.clauses.push_back(clauses[a]);
      if (b < clauses.size() && b != a) f.clauses.push_back(clauses[b]);
      if (a == clauses.size() && b != clauses.size()) continue;
      if (a < clauses.size() && b == a) continue;
      const auto z = encode_3sat(f, kLayout);
      CHECK(z.size() == kLayout.width());
      CHECK(decode_3sat(z, kLayout) == f);
      seen.insert(z.to_string());
      ++count;
    }
  }
  CHECK(seen.size() == count);
}

TEST_CASE("3-SAT encoding canonicalizes literal order and rejects malformed strings") {
  ThreeSatInstance f{2, {{{2, true}, {1, false}}}};
  const auto z = encode_3sat(f, kLayout);
  ThreeSatInstance canon = f;
  canon.canonicalize();
  CHECK(decode_3sat(z, kLayout) == canon);

  const auto empty = decode_3sat(BitString(kLayout.width()), kLayout);
  CHECK(empty.num_vars == 0);
  CHECK(empty.clauses.empty());

  CHECK_THROWS_AS(decode_3sat(BitString(kLayout.width() + 1), kLayout), ParseError);
  auto bad = z;
  bad.set(kLayout.width() - 1, true);  // stray bit inside an unused clause slot
  CHECK_THROWS_AS(decode_3sat(bad, kLayout), ParseError);
  // Non-decoding instances are outside the language.
  ThreeSatVerifier v(kLayout);
  CHECK_FALSE(nondet_oracle(v, bad));

  ThreeSatInstance too_many{3, {}};
  CHECK_THROWS_AS(encode_3sat(too_many, kLayout), ConfigError);
}

TEST_CASE("DIMACS parsing") {
  std::istringstream ok("c comment\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n");
  const auto f = parse_dimacs(ok);
  CHECK(f.num_vars == 3);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == Clause{{1, true}, {2, false}});
  CHECK(f.clauses[1] == Clause{{1, false}, {2, true}, {3, true}});

  std::ostringstream out;
  write_dimacs(out, f);
  std::istringstream back(out.str());
  CHECK(parse_dimacs(back) == f);

  std::istringstream wide("p cnf 4 1\n1 2 3 4 0\n");
  CHECK_THROWS_AS(parse_dimacs(wide), ParseError);
  std::istringstream count("p cnf 2 2\n1 0\n");
  CHECK_THROWS_AS(parse_dimacs(count), ParseError);
  std::istringstream range("p cnf 2 1\n3 0\n");
  CHECK_THROWS_AS(parse_dimacs(range), ParseError);
  std::istringstream noheader("1 2 0\n");
  CHECK_THROWS_AS(parse_dimacs(noheader), ParseError);
}

TEST_CASE("brute-force satisfiability") {
  CHECK(brute_force_satisfiable(phi0()));
  CHECK_FALSE(brute_force_satisfiable(phi_unsat()));
  CHECK(brute_force_satisfiable(ThreeSatInstance{2, {}}));
}
