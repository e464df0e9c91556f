#include <algorithm>
#include <bit>
#include <cmath>

#include "certlearn/corpus.hpp"
#include "certlearn/errors.hpp"
#include "certlearn/online.hpp"
#include "doctest.h"

using namespace certlearn;

namespace {

const CodeParams kCode;

ThreeSatInstance phi0() { return {2, {{{1, true}, {2, true}}, {{1, false}, {2, true}}}}; }
ThreeSatInstance phi_unsat() { return {2, {{{1, true}}, {{1, false}}}}; }

// Optimal mistake bound straight from the definition, over explicit label
// rows and without pruning or a depth cap.
std::size_t naive_ldim(const std::vector<std::vector<bool>>& rows, std::size_t points) {
  if (rows.size() < 2) return 0;
  std::size_t best = 0;
  for (std::size_t j = 0; j < points; ++j) {
    std::vector<std::vector<bool>> split[2];
    for (const auto& r : rows) split[r[j]].push_back(r);
    if (split[0].empty() || split[1].empty()) continue;
    best = std::max(best, 1 + std::min(naive_ldim(split[0], points), naive_ldim(split[1], points)));
  }
  return best;
}

std::size_t naive_vc(const std::vector<std::uint64_t>& masks, std::size_t points) {
  std::size_t best = 0;
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << points); ++set) {
    const auto k = static_cast<std::size_t>(std::popcount(set));
    if (k <= best) continue;
    std::vector<bool> seen(std::size_t{1} << k, false);
    for (auto m : masks) {
      std::uint64_t pattern = 0;
      std::size_t bit = 0;
      for (std::size_t j = 0; j < points; ++j) {
        if ((set >> j) & 1U) pattern |= ((m >> j) & 1U) << bit++;
      }
      seen[pattern] = true;
    }
    if (std::ranges::all_of(seen, [](bool b) { return b; })) best = k;
  }
  return best;
}

// Eight points: four on phi0's prefix (two 1-points, two 0-points), two
// 1-points of other satisfiable formulas, one useless index and one point of
// an unsatisfiable formula.
std::vector<BitString> probe_domain(const ThreeSatVerifier& v, const CertConcept& f) {
  std::vector<BitString> probe;
  const auto ones = f.one_points();
  probe.push_back(ones.front());
  probe.push_back(ones.back());
  std::uint64_t zeros = 0;
  for (std::uint64_t i = 0; i < f.layout().useful && zeros < 2; ++i) {
    if (!f.label_at(i)) {
      probe.push_back(f.layout().example(f.z(), i));
      ++zeros;
    }
  }
  // Neither is satisfied by 00, so both have nonzero codewords.
  const ThreeSatInstance a{2, {{{1, true}}}};
  const ThreeSatInstance b{2, {{{2, true}}}};
  for (const auto& g : {a, b}) {
    const CertConcept cg(v, v.encode(g), kCode);
    REQUIRE(cg.sparsity() > 0);
    probe.push_back(cg.one_points().front());
  }
  probe.push_back(f.layout().example(f.z(), f.layout().index_count() - 1));
  const CertConcept u(v, v.encode(phi_unsat()), kCode);
  probe.push_back(u.layout().example(u.z(), 3));
  return probe;
}

// The corpus lists clauses in sorted order, so phi0 as written is added.
std::vector<CertConcept> corpus_class(const ThreeSatVerifier& v) {
  std::vector<CertConcept> out{CertConcept(v, v.encode(phi0()), kCode)};
  for (const auto& g : exhaustive_corpus(2, 3)) out.emplace_back(v, v.encode(g), kCode);
  return out;
}

std::vector<ProbeConcept> distinct(std::vector<std::uint64_t> masks, std::size_t bound) {
  std::ranges::sort(masks);
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<ProbeConcept> out;
  for (auto m : masks) out.push_back({m, bound});
  return out;
}

}  // namespace

TEST_CASE("single_mistake_learner examples") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const CertConcept u(v, v.encode(phi_unsat()), kCode);
  const CertConcept f(v, v.encode(phi0()), kCode);
  Rng rng(11);

  std::vector<LabeledExample> zeros;
  for (int t = 0; t < 40; ++t) {
    const auto x = u.layout().example(u.z(), rng.below(u.layout().index_count()));
    zeros.push_back({x, u(x)});
  }
  SingleMistakeLearner a(v, kCode);
  CHECK(run_online(a, zeros).mistakes == 0);
  CHECK_FALSE(a.identified());

  for (std::size_t k : {0U, 1U, 5U, 12U}) {
    std::vector<LabeledExample> seq;
    std::uint64_t i = 0;
    while (seq.size() < k) {
      if (!f.label_at(i)) seq.push_back({f.layout().example(f.z(), i), false});
      i = (i + 1) % f.layout().index_count();
    }
    seq.push_back({f.one_points().front(), true});
    for (int t = 0; t < 30; ++t) {
      const auto x = f.layout().example(f.z(), rng.below(f.layout().index_count()));
      seq.push_back({x, f(x)});
    }
    SingleMistakeLearner b(v, kCode);
    const auto log = run_online(b, seq);
    CHECK(log.mistakes == 1);
    CHECK(log.rounds[k].mistake);
    CHECK(b.identified());
    CHECK(b.hypothesis() == Hypothesis(build_decision_tree(f)));
    for (const auto& r : log.rounds) CHECK(r.mistake == (r.prediction != r.true_label));
  }

  SingleMistakeLearner c(v, kCode);
  const auto x = f.one_points().front();
  c.observe(x, c.predict(x), false);
  c.observe(x, true, false);
  CHECK_THROWS_AS(c.observe(x, false, c.predict(x)), AdversaryInconsistency);
  SingleMistakeLearner d(v, kCode);
  const auto bad = f.layout().example(f.z(), 0);
  if (!f(bad)) CHECK_THROWS_AS(d.observe(bad, true, false), AdversaryInconsistency);
}

TEST_CASE("single_mistake_learner against exhaustive adversaries") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const CertConcept f(v, v.encode(phi0()), kCode);
  const auto probe = probe_domain(v, f);
  REQUIRE(probe.size() == 8);
  const auto cls = corpus_class(v);
  const auto concepts = distinct(probe_masks(std::span<const CertConcept>(cls), probe), 1);
  CHECK(concepts.size() >= 4);
  const auto report = exhaustive_adversary(SingleMistakeLearner(v, kCode), probe, concepts, 6);
  CHECK(report.violations == 0);
  CHECK(report.max_mistakes == 1);
  CHECK(report.worst.size() >= 1);

  // Restricted to the single concept Cert_phi0.
  const std::vector<ProbeConcept> only{
      {probe_masks(std::span<const CertConcept>(&f, 1), probe).front(), 1}};
  const auto r0 = exhaustive_adversary(SingleMistakeLearner(v, kCode), probe, only, 6);
  CHECK(r0.violations == 0);
  CHECK(r0.max_mistakes == 1);

  // The sorted-list learner on the same domain needs up to the sparsity.
  const std::vector<ProbeConcept> only2{{only.front().mask, 2}};
  const auto sorted = exhaustive_adversary(SortedListLearner(2), probe, only2, 6);
  CHECK(sorted.max_mistakes == 2);
  CHECK(sorted.violations == 0);
}

TEST_CASE("adversary bookkeeping on a hand-traced class") {
  // Two points, class {00, 01, 11} (bit j = label of point j).
  const std::vector<BitString> probe{BitString::from_string("0"), BitString::from_string("1")};
  const std::vector<ProbeConcept> cls{{0b00, 2}, {0b01, 2}, {0b11, 2}};
  const auto r1 = exhaustive_adversary(SortedListLearner(2), probe, cls, 1);
  // Round one: point 0 answerable 0 or 1; point 1 answerable 0 or 1.
  CHECK(r1.sequences == 4);
  CHECK(r1.max_mistakes == 1);
  const auto r2 = exhaustive_adversary(SortedListLearner(2), probe, cls, 2);
  CHECK(r2.max_mistakes == 2);
  CHECK(r2.violations == 0);
  const std::vector<ProbeConcept> tight{{0b00, 0}, {0b01, 0}, {0b11, 0}};
  CHECK(exhaustive_adversary(SortedListLearner(2), probe, tight, 2).violations > 0);
  CHECK_THROWS_AS(exhaustive_adversary(SortedListLearner(2), probe, {}, 2), ConfigError);
}

TEST_CASE("sorted_list_learner") {
  const auto pts = std::vector<BitString>{BitString::from_string("0001"),
                                          BitString::from_string("0110"),
                                          BitString::from_string("1011")};
  std::vector<LabeledExample> zeros;
  for (std::uint64_t x = 0; x < 16; ++x) zeros.push_back({BitString::from_uint(x, 4), false});
  SortedListLearner z(3);
  CHECK(run_online(z, zeros).mistakes == 0);
  CHECK(z.hypothesis() == Hypothesis{});

  std::vector<LabeledExample> twice;
  for (const auto& p : pts) twice.push_back({p, true});
  for (const auto& p : pts) twice.push_back({p, true});
  SortedListLearner s(3);
  const auto log = run_online(s, twice);
  CHECK(log.mistakes == 3);
  for (std::size_t r = 0; r < 6; ++r) CHECK(log.rounds[r].mistake == (r < 3));
  CHECK(s.list_size() == 3);
  CHECK(s.hypothesis() == Hypothesis(PointTable{pts}));
  CHECK_THROWS_AS(s.observe(pts[0], false, true), AdversaryInconsistency);
}

TEST_CASE("sorted_list_learner over random adversaries against Cert concepts") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const auto formulas = exhaustive_corpus(2, 3);
  Rng rng(21);
  std::size_t worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const CertConcept f(v, v.encode(formulas[rng.below(formulas.size())]), kCode);
    const auto sparsity = f.sparsity();
    SortedListLearner learner(sparsity);
    const auto len = 1 + rng.below(40);
    std::vector<LabeledExample> seq;
    for (std::uint64_t t = 0; t < len; ++t) {
      BitString x;
      switch (rng.below(3)) {
        case 0: x = f.layout().example(f.z(), rng.below(f.layout().index_count())); break;
        case 1: x = rng.bits(f.layout().width()); break;
        default:
          x = sparsity ? f.one_points()[rng.below(sparsity)] : rng.bits(f.layout().width());
      }
      seq.push_back({x, f(x)});
    }
    const auto log = run_online(learner, seq);
    CHECK(log.mistakes <= sparsity);
    CHECK(learner.list_size() <= sparsity);
    for (const auto& r : log.rounds) REQUIRE(r.mistake == (r.prediction != r.true_label));
    const auto cap = static_cast<std::uint64_t>(std::bit_width(learner.list_size()));
    learner.predict(seq.front().point);
    CHECK(learner.last_comparisons() <= cap);
    worst = std::max(worst, log.mistakes);
  }
  CHECK(worst >= 2);
}

TEST_CASE("ldim_oracle examples") {
  const std::vector<std::uint64_t> singleton{0b1011};
  CHECK(ldim_oracle(singleton, 4).value == 0);
  const std::vector<std::uint64_t> constants{0b0000, 0b1111};
  const auto two = ldim_oracle(constants, 4);
  CHECK(two.value == 1);
  CHECK_FALSE(two.truncated);
  CHECK_THROWS_AS(ldim_oracle(constants, 17), BudgetExceeded);
  CHECK_THROWS_AS(ldim_oracle(constants, 4, 4), BudgetExceeded);
  CHECK_THROWS_AS(ldim_oracle({}, 4), ConfigError);

  // All labelings of two points: dimension 2. Of three points, truncated at 2.
  const std::vector<std::uint64_t> cube2{0, 1, 2, 3};
  CHECK(ldim_oracle(cube2, 2).value == 2);
  std::vector<std::uint64_t> cube3;
  for (std::uint64_t m = 0; m < 8; ++m) cube3.push_back(m);
  const auto cut = ldim_oracle(cube3, 3, 2);
  CHECK(cut.value == 2);
  CHECK(cut.truncated);
  CHECK(ldim_oracle(cube3, 3).value == 3);

  // Thresholds on 8 points: log2 of 9 concepts, rounded down, is 3.
  std::vector<std::uint64_t> thresholds;
  for (std::size_t t = 0; t <= 8; ++t) thresholds.push_back((std::uint64_t{1} << t) - 1);
  CHECK(ldim_oracle(thresholds, 8).value == 3);
}

TEST_CASE("ldim_oracle agrees with the naive definition") {
  Rng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t points = 1 + rng.below(5);
    const std::size_t count = 1 + rng.below(10);
    std::vector<std::uint64_t> masks;
    std::vector<std::vector<bool>> rows;
    for (std::size_t c = 0; c < count; ++c) {
      const auto m = rng.below(std::uint64_t{1} << points);
      masks.push_back(m);
      std::vector<bool> row;
      for (std::size_t j = 0; j < points; ++j) row.push_back((m >> j) & 1U);
      rows.push_back(row);
    }
    std::ranges::sort(rows);
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    const auto expect = naive_ldim(rows, points);
    const auto got = ldim_oracle(masks, points, 5, 16, 5);
    CHECK(got.value == expect);
    CHECK(got.value >= naive_vc(masks, points));
    const auto capped = ldim_oracle(masks, points, 2);
    CHECK(capped.value == std::min<std::size_t>(expect, 2));
  }
}

TEST_CASE("ldim of the restricted certificate class") {
  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const CertConcept f(v, v.encode(phi0()), kCode);
  const auto probe = probe_domain(v, f);
  const auto cls = corpus_class(v);
  const auto masks = probe_masks(std::span<const CertConcept>(cls), probe);
  const auto r = ldim_oracle(masks, probe.size());
  CHECK(r.value == 1);
  CHECK_FALSE(r.truncated);
  CHECK(r.value >= naive_vc(masks, probe.size()));

  std::vector<CertConcept> unsat_only;
  for (const auto& c : cls) {
    if (c.sparsity() == 0) unsat_only.push_back(c);
  }
  REQUIRE_FALSE(unsat_only.empty());
  CHECK(ldim_oracle(probe_masks(std::span<const CertConcept>(unsat_only), probe), 8).value == 0);
}

TEST_CASE("online_to_pac") {
  CHECK(online_to_pac_size(1, 0.1, 0.1) == 661);
  CHECK(online_to_pac_size(0, 0.1, 0.1) == 461);
  CHECK(online_to_pac_size(16, 0.1, 0.01, 20) ==
        static_cast<std::size_t>(std::ceil(20 * (16 + std::log(100.0)) / 0.1)));
  CHECK_THROWS_AS(online_to_pac_size(1, 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(online_to_pac_size(1, 0.1, 1.0), ConfigError);

  ThreeSatVerifier v(FormulaLayout::minimal(2, 3));
  const CertConcept f(v, v.encode(phi0()), kCode);
  const auto conv = online_to_pac(SingleMistakeLearner(v, kCode), 1, 0.1, 0.1);
  CHECK(conv.sample_size == 661);
  const auto suite = distribution_suite(f);
  for (const auto& [name, d] : suite) {
    const auto r = pac_trial_suite(conv.learner, f, d, 0.1, conv.sample_size, 20, 5);
    CHECK(r.success_rate() >= 0.9);
  }

  // The output is one of the learner's intermediate hypotheses.
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto s = draw_sample(suite[t % suite.size()].d, f, 30, rng);
    SingleMistakeLearner replay(v, kCode);
    std::vector<Hypothesis> seen{replay.hypothesis()};
    for (const auto& [x, y] : s.pairs) {
      const bool pred = replay.predict(x);
      replay.observe(x, y, pred);
      if (seen.back() != replay.hypothesis()) seen.push_back(replay.hypothesis());
    }
    const auto h = conv.learner(s, rng).hypothesis;
    CHECK(std::ranges::find(seen, h) != seen.end());
  }

  // A zero-mistake learner returns the concept itself.
  const CertConcept u(v, v.encode(phi_unsat()), kCode);
  const auto zero = online_to_pac(SortedListLearner(0), 0, 0.1, 0.1);
  const auto d = distribution_suite(u).front().d;
  const auto sample = draw_sample(d, u, zero.sample_size, rng);
  const auto h = zero.learner(sample, rng).hypothesis;
  CHECK(h == Hypothesis{});
  CHECK(error_of(d, u, h) == 0.0);
}
