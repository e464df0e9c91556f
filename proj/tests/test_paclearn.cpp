#include <cmath>
#include <map>

#include "certlearn/corpus.hpp"
#include "certlearn/errors.hpp"
#include "certlearn/paclearn.hpp"
#include "doctest.h"

using namespace certlearn;

namespace {

const CodeParams kCode;

ThreeSatInstance phi0() { return {2, {{{1, true}, {2, true}}, {{1, false}, {2, true}}}}; }
ThreeSatInstance phi_unsat() { return {2, {{{1, true}}, {{1, false}}}}; }

std::vector<BitString> all_points(std::size_t width) {
  std::vector<BitString> out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << width); ++x) {
    out.push_back(BitString::from_uint(x, width));
  }
  return out;
}

// Exact binomial tail by direct summation of products, no logs.
double direct_upper_tail(std::size_t n, double q, std::size_t k) {
  double total = 0.0;
  for (std::size_t j = k; j <= n; ++j) {
    double c = 1.0;
    for (std::size_t t = 0; t < j; ++t) c = c * static_cast<double>(n - t) / static_cast<double>(t + 1);
    total += c * std::pow(q, static_cast<double>(j)) * std::pow(1 - q, static_cast<double>(n - j));
  }
  return total;
}

}  // namespace

TEST_CASE("distributions and draw_sample") {
  CHECK_THROWS_AS(Distribution({BitString(2)}, {0.5}), ConfigError);
  CHECK_THROWS_AS(Distribution({BitString(2), BitString(3)}, {0.5, 0.5}), ConfigError);
  CHECK_THROWS_AS(Distribution({BitString(2)}, {-1.0}), ConfigError);
  Rng rng(4);
  const ConstantHypothesis zero;
  CHECK(draw_sample(Distribution(), zero, 0, rng).m() == 0);
  CHECK_THROWS_AS(draw_sample(Distribution(), zero, 1, rng), ConfigError);

  const auto x = BitString::from_string("101");
  const auto point = draw_sample(Distribution::point_mass(x), ConstantHypothesis{true}, 5, rng);
  REQUIRE(point.m() == 5);
  for (const auto& [pt, label] : point.pairs) {
    CHECK(pt == x);
    CHECK(label);
  }

  const auto d = Distribution::uniform(all_points(2));
  const auto s = draw_sample(d, zero, 10000, rng);
  std::map<std::string, int> counts;
  for (const auto& [pt, label] : s.pairs) ++counts[pt.to_string()];
  const double sigma = std::sqrt(10000 * 0.25 * 0.75);
  CHECK(counts.size() == 4);
  for (const auto& [key, c] : counts) CHECK(std::abs(c - 2500.0) <= 3 * sigma);
}

TEST_CASE("error_of examples") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const CertConcept f(v, v.encode(phi0()), kCode);
  const auto suite = distribution_suite(f);
  const auto& uniform = suite.front().d;
  CHECK(suite.front().name == "uniform_useful");
  CHECK(error_of(uniform, f, f) == 0.0);
  const auto flipped = [&](const BitString& x) { return !f(x); };
  CHECK(error_of(uniform, f, flipped) == doctest::Approx(1.0));
  const auto word = encode(kCode, BitString::from_string("01")).bits;
  CHECK(error_of(uniform, f, ConstantHypothesis{false}) ==
        doctest::Approx(static_cast<double>(word.popcount()) / 16.0));
}

TEST_CASE("few_sample_learner") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const CertConcept f(v, v.encode(phi0()), kCode);
  std::uint64_t one = 0;
  while (!f.label_at(one)) ++one;
  LabeledSample s{{{f.layout().example(f.z(), one), true}}};
  const auto report = few_sample_learner(s, v, kCode);
  CHECK(report.hypothesis.kind() == "tree");
  CHECK(report.samples_used == 1);
  for (const auto& [name, d] : distribution_suite(f)) CHECK(error_of(d, f, report.hypothesis) == 0.0);
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const auto x = rng.bits(f.layout().width());
    CHECK(report.hypothesis(x) == f(x));
  }

  LabeledSample zeros{{{f.layout().example(f.z(), 0), false}}};
  CHECK(few_sample_learner(zeros, v, kCode).hypothesis.kind() == "constant");
  CHECK(few_sample_learner(LabeledSample{}, v, kCode).hypothesis == Hypothesis{});

  const CertConcept u(v, v.encode(phi_unsat()), kCode);
  Rng r2(5);
  const auto su = draw_sample(distribution_suite(u).front().d, u, 30, r2);
  CHECK(few_sample_learner(su, v, kCode).hypothesis == Hypothesis{});

  auto other = f.z();
  other.flip(0);
  s.pairs.push_back({f.layout().example(other, one), true});
  CHECK_THROWS_AS(few_sample_learner(s, v, kCode), DataInconsistency);
}

TEST_CASE("sparse_erm") {
  const auto a = BitString::from_string("0011");
  const auto b = BitString::from_string("0101");
  const auto r = sparse_erm(LabeledSample{{{a, true}, {b, false}, {a, true}}});
  CHECK(r.hypothesis(a));
  CHECK_FALSE(r.hypothesis(b));
  CHECK_FALSE(r.hypothesis(BitString::from_string("1111")));
  CHECK(r.hypothesis.size() == 1);
  CHECK(sparse_erm(LabeledSample{}).hypothesis == Hypothesis{});
  CHECK_THROWS_AS(sparse_erm(LabeledSample{{{a, true}, {a, false}}}), DataInconsistency);

  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const CertConcept f(v, v.encode(phi0()), kCode);
  LabeledSample all;
  for (const auto& x : f.one_points()) all.pairs.push_back({x, true});
  const auto h = sparse_erm(all).hypothesis;
  for (const auto& [name, d] : distribution_suite(f)) CHECK(error_of(d, f, h) == 0.0);
  CHECK(empirical_error(all, h) == 0.0);
}

TEST_CASE("junta_learner") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const UnifCertConcept f(v, v.encode(phi0()), kCode);
  const auto& layout = f.layout();
  Rng rng(6);
  LabeledSample full;
  LabeledSample half;
  for (std::uint64_t i = 0; i < layout.index_count(); ++i) {
    const auto x = layout.example(rng.bits(layout.n), i);
    full.pairs.push_back({x, f(x)});
    if (i % 2 == 0) half.pairs.push_back({x, f(x)});
  }
  std::vector<BitString> domain;
  for (int t = 0; t < 64; ++t) domain.push_back(rng.bits(layout.width()));
  for (std::uint64_t i = 0; i < layout.index_count(); ++i) {
    domain.push_back(layout.example(rng.bits(layout.n), i));
  }
  // Uniform over indices: every index carries equal weight.
  std::vector<BitString> by_index;
  for (std::uint64_t i = 0; i < layout.index_count(); ++i) {
    by_index.push_back(layout.example(rng.bits(layout.n), i));
  }
  const auto d = Distribution::uniform(by_index);
  CHECK(error_of(d, f, junta_learner(full, layout).hypothesis) == 0.0);
  for (const auto& x : domain) CHECK(junta_learner(full, layout).hypothesis(x) == f(x));

  double unobserved_ones = 0;
  for (std::uint64_t i = 1; i < layout.index_count(); i += 2) unobserved_ones += f.label_at(i);
  CHECK(error_of(d, f, junta_learner(half, layout).hypothesis) <=
        unobserved_ones / static_cast<double>(layout.index_count()) + 1e-12);

  CHECK(junta_learner(LabeledSample{}, layout).hypothesis == Hypothesis{});
  auto bad = full;
  bad.pairs.push_back({full.pairs[0].point, !full.pairs[0].label});
  CHECK_THROWS_AS(junta_learner(bad, layout), DataInconsistency);
}

TEST_CASE("erm_learner follows enumeration order") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  std::vector<BitString> seeds;
  for (const auto& f : exhaustive_corpus(2, 2)) seeds.push_back(v.encode(f));
  const auto cls = enumerate_class(v, seeds, kCode);
  CHECK(erm_learner(cls, LabeledSample{}).hypothesis == Hypothesis(cls.front().tree));

  // phi0 with its clauses in corpus order.
  const ThreeSatInstance phi0_sorted{2, {{{1, false}, {2, true}}, {{1, true}, {2, true}}}};
  const CertConcept target(v, v.encode(phi0_sorted), kCode);
  LabeledSample s;
  for (const auto& x : target.one_points()) s.pairs.push_back({x, true});
  const auto r = erm_learner(cls, s);
  CHECK(empirical_error(s, r.hypothesis) == 0.0);
  CHECK(r.hypothesis == Hypothesis(build_decision_tree(target)));

  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto& pick = cls[rng.below(cls.size())];
    LabeledSample ps;
    for (const auto& x : pick.cert.one_points()) ps.pairs.push_back({x, true});
    ps.pairs.push_back({pick.cert.layout().example(pick.cert.z(), 0), pick.cert.label_at(0)});
    CHECK(empirical_error(ps, erm_learner(cls, ps).hypothesis) == 0.0);
  }
  const auto x = target.one_points().front();
  CHECK_THROWS_AS(erm_learner(cls, LabeledSample{{{x, true}, {x, false}}}), DataInconsistency);
}

TEST_CASE("pac_trial_suite") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const CertConcept f(v, v.encode(phi0()), kCode);
  const auto d = distribution_suite(f).front().d;
  const auto few = make_few_sample_learner(v, kCode);
  const auto r = pac_trial_suite(few, f, d, 0.1, 47, 50, 9);
  CHECK(r.success_rate() == 1.0);
  const BatchLearner zero = [](const LabeledSample& s, Rng&) {
    return LearnerReport{Hypothesis{}, s.m(), 0, 0.0};
  };
  CHECK(pac_trial_suite(zero, f, d, 0.1, 47, 50, 9).success_rate() == 0.0);
  // Determinism.
  const auto r2 = pac_trial_suite(few, f, d, 0.1, 47, 50, 9);
  CHECK(r2.successes == r.successes);
  CHECK(r2.mean_steps == r.mean_steps);
}

TEST_CASE("sample-size arithmetic and binomial tails") {
  CHECK(few_sample_size(0.1, 0.01) == 47);
  CHECK(std::pow(0.9, 47) <= std::exp(-0.1 * 47));
  CHECK(std::exp(-0.1 * 47) <= 0.01);
  CHECK(std::exp(-0.1 * 46) > 0.01);
  CHECK(sparse_erm_size(16, 0.1, 0.01) == 157);
  for (std::size_t n : {1, 5, 20, 60}) {
    for (double q : {0.01, 0.3, 0.9}) {
      for (std::size_t k = 0; k <= n; k += 3) {
        CHECK(binomial_upper_tail(n, q, k) == doctest::Approx(direct_upper_tail(n, q, k)).epsilon(1e-9));
        if (k > 0) {
          CHECK(binomial_lower_tail(n, q, k - 1) + binomial_upper_tail(n, q, k) ==
                doctest::Approx(1.0).epsilon(1e-9));
        }
      }
    }
  }
}
