#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "certlearn/bitstring.hpp"
#include "certlearn/concepts.hpp"
#include "certlearn/errors.hpp"
#include "certlearn/rng.hpp"

namespace certlearn {

/// Finite-support distribution over equal-length examples.
class Distribution {
 public:
  Distribution() = default;
  /// Throws ConfigError on mismatched lengths, negative weights, or weights
  /// not summing to 1 within 1e-9.
  Distribution(std::vector<BitString> support, std::vector<double> weights);

  static Distribution uniform(std::vector<BitString> support);
  static Distribution point_mass(BitString x);

  const std::vector<BitString>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  bool empty() const { return support_.empty(); }
  const BitString& draw(Rng& rng) const;

 private:
  std::vector<BitString> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

struct LabeledExample {
  BitString point;
  bool label = false;
};

struct LabeledSample {
  std::vector<LabeledExample> pairs;
  std::size_t m() const { return pairs.size(); }
};

struct ConstantHypothesis {
  bool value = false;
  bool operator()(const BitString&) const { return value; }
  friend bool operator==(const ConstantHypothesis&, const ConstantHypothesis&) = default;
};

/// 1 exactly on the listed points.
struct PointTable {
  std::vector<BitString> ones;  // sorted, distinct
  bool operator()(const BitString& x) const;
  friend bool operator==(const PointTable&, const PointTable&) = default;
};

/// Table over the index_bits bits starting at `offset`.
struct JuntaTable {
  std::size_t offset = 0;
  std::size_t index_bits = 0;
  BitString table;
  bool operator()(const BitString& x) const;
  friend bool operator==(const JuntaTable&, const JuntaTable&) = default;
};

class Hypothesis {
 public:
  using Repr = std::variant<ConstantHypothesis, PointTable, JuntaTable, DecisionTree>;

  Hypothesis() : repr_(ConstantHypothesis{}) {}
  Hypothesis(Repr repr) : repr_(std::move(repr)) {}  // NOLINT: implicit by design

  bool operator()(const BitString& x) const;
  /// Constant: 1. Table: listed points. Junta: 2^l. Tree: leaves.
  std::size_t size() const;
  std::string kind() const;
  const Repr& repr() const { return repr_; }
  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

 private:
  Repr repr_;
};

/// Learner output; `steps` is the machine-independent cost measure.
struct LearnerReport {
  Hypothesis hypothesis;
  std::size_t samples_used = 0;
  std::uint64_t steps = 0;
  double elapsed_seconds = 0.0;
};

/// A batch learner may use the generator after the sample has been drawn.
using BatchLearner = std::function<LearnerReport(const LabeledSample&, Rng&)>;

template <Labeler F>
LabeledSample draw_sample(const Distribution& d, const F& f, std::size_t m, Rng& rng);

template <Labeler F, Labeler H>
double error_of(const Distribution& d, const F& f, const H& h) {
  double err = 0.0;
  for (std::size_t k = 0; k < d.support().size(); ++k) {
    if (static_cast<bool>(f(d.support()[k])) != static_cast<bool>(h(d.support()[k]))) {
      err += d.weights()[k];
    }
  }
  return err;
}

/// Fraction of sample points h labels differently from the sample.
double empirical_error(const LabeledSample& s, const Hypothesis& h);

/// Any 1-label fixes z; the first certificate then gives the exact tree.
/// Throws DataInconsistency when 1-labels disagree on z.
LearnerReport few_sample_learner(const LabeledSample& s, const Verifier& v, const CodeParams& code,
                                 const OracleBudget& budget = {});

/// h(x) = 1 iff (x, 1) is in the sample.
LearnerReport sparse_erm(const LabeledSample& s);

/// Index -> observed label; unobserved indices are 0.
LearnerReport junta_learner(const LabeledSample& s, const ExampleLayout& layout);

/// First enumerated concept consistent with the sample.
LearnerReport erm_learner(std::span<const EnumeratedConcept> cls, const LabeledSample& s);

BatchLearner make_few_sample_learner(const Verifier& v, const CodeParams& code,
                                     OracleBudget budget = {});
BatchLearner make_sparse_erm();
BatchLearner make_junta_learner(const ExampleLayout& layout);

struct NamedDistribution {
  std::string name;
  Distribution d;
};

/// Distributions exercised for Cert_z: uniform on the c*p useful points,
/// 90% mass on one useless point (rest uniform on useful points), and point
/// masses on a useful 1-point, a useful 0-point and a useless point.
std::vector<NamedDistribution> distribution_suite(const CertConcept& target);

struct SuiteResult {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double mean_error = 0.0;
  double mean_steps = 0.0;
  double elapsed_seconds = 0.0;
  double success_rate() const {
    return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  }
};

/// Trial t uses Rng(Rng::derive(seed, t)): m draws, then the learner.
template <Labeler F>
SuiteResult pac_trial_suite(const BatchLearner& learner, const F& target, const Distribution& d,
                            double eps, std::size_t m, std::size_t trials, std::uint64_t seed);

/// ceil(ln(1/delta) / eps), so that (1 - eps)^m <= exp(-eps m) <= delta.
std::size_t few_sample_size(double eps, double delta);
/// ceil((s ln 2 + ln(1/delta)) / eps) for s-sparse targets.
std::size_t sparse_erm_size(std::size_t sparsity, double eps, double delta);

/// P[Binomial(n, q) >= k].
double binomial_upper_tail(std::size_t n, double q, std::size_t k);
/// P[Binomial(n, q) <= k].
double binomial_lower_tail(std::size_t n, double q, std::size_t k);

// ---------------------------------------------------------------------------

template <Labeler F>
LabeledSample draw_sample(const Distribution& d, const F& f, std::size_t m, Rng& rng) {
  if (m > 0 && d.empty()) throw ConfigError("cannot sample from an empty distribution");
  LabeledSample s;
  s.pairs.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const BitString& x = d.draw(rng);
    s.pairs.push_back({x, static_cast<bool>(f(x))});
  }
  return s;
}

template <Labeler F>
SuiteResult pac_trial_suite(const BatchLearner& learner, const F& target, const Distribution& d,
                            double eps, std::size_t m, std::size_t trials, std::uint64_t seed) {
  SuiteResult out;
  out.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t));
    const auto sample = draw_sample(d, target, m, rng);
    const auto report = learner(sample, rng);
    const double err = error_of(d, target, report.hypothesis);
    if (err <= eps + 1e-12) ++out.successes;
    out.mean_error += err;
    out.mean_steps += static_cast<double>(report.steps);
    out.elapsed_seconds += report.elapsed_seconds;
  }
  if (trials) {
    out.mean_error /= static_cast<double>(trials);
    out.mean_steps /= static_cast<double>(trials);
  }
  return out;
}

}  // namespace certlearn
