#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "certlearn/paclearn.hpp"

namespace certlearn {

struct OnlineRound {
  BitString point;
  bool prediction = false;
  bool true_label = false;
  bool mistake = false;
  double elapsed_seconds = 0.0;
};

struct OnlineRunLog {
  std::vector<OnlineRound> rounds;
  std::size_t mistakes = 0;
};

/// Predict, then see the true label. Learners that change state only after a
/// mistake are conservative.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  virtual std::string name() const = 0;
  virtual bool predict(const BitString& x) = 0;
  /// Throws AdversaryInconsistency when `label` contradicts every concept the
  /// learner can still be facing.
  virtual void observe(const BitString& x, bool label, bool predicted) = 0;
  virtual Hypothesis hypothesis() const = 0;
  virtual std::unique_ptr<OnlineLearner> clone() const = 0;
  virtual std::uint64_t steps() const = 0;
};

/// Predicts 0 until the first 1-labeled (z, i), then finds w* for that z and
/// predicts Cert_z exactly. At most one mistake against any Cert_z.
class SingleMistakeLearner final : public OnlineLearner {
 public:
  SingleMistakeLearner(const Verifier& v, const CodeParams& code, OracleBudget budget = {});

  std::string name() const override { return "single_mistake"; }
  bool predict(const BitString& x) override;
  void observe(const BitString& x, bool label, bool predicted) override;
  Hypothesis hypothesis() const override;
  std::unique_ptr<OnlineLearner> clone() const override;
  std::uint64_t steps() const override { return steps_; }

  bool identified() const { return target_ != nullptr; }

 private:
  const Verifier* v_;
  CodeParams code_;
  OracleBudget budget_;
  std::shared_ptr<const CertConcept> target_;
  std::uint64_t steps_ = 0;
};

/// Sorted list of points seen with label 1; predicts 1 exactly on the list.
/// At most s mistakes against an s-sparse target.
class SortedListLearner final : public OnlineLearner {
 public:
  explicit SortedListLearner(std::size_t sparsity_bound) : bound_(sparsity_bound) {}

  std::string name() const override { return "sorted_list"; }
  bool predict(const BitString& x) override;
  void observe(const BitString& x, bool label, bool predicted) override;
  Hypothesis hypothesis() const override;
  std::unique_ptr<OnlineLearner> clone() const override;
  std::uint64_t steps() const override { return comparisons_; }

  std::size_t sparsity_bound() const { return bound_; }
  std::size_t list_size() const { return list_.size(); }
  /// Comparisons made by the most recent predict().
  std::uint64_t last_comparisons() const { return last_comparisons_; }

 private:
  std::size_t bound_;
  std::vector<BitString> list_;
  std::uint64_t comparisons_ = 0;
  std::uint64_t last_comparisons_ = 0;
};

OnlineRunLog run_online(OnlineLearner& learner, std::span<const LabeledExample> sequence);

/// A concept seen through a probe domain of at most 64 points: bit j of
/// `mask` is its label on probe point j. `mistake_bound` is the bound the
/// learner must respect while this concept is still consistent.
struct ProbeConcept {
  std::uint64_t mask = 0;
  std::size_t mistake_bound = 0;
};

struct AdversaryReport {
  std::size_t max_mistakes = 0;
  std::uint64_t sequences = 0;  // adversary paths explored (nodes of the game tree)
  std::uint64_t violations = 0;
  std::vector<LabeledExample> worst;  // a sequence reaching max_mistakes
};

/// Every adversary of up to `max_len` rounds over `probe` whose answers keep
/// the version space nonempty. A violation is a path whose mistake count
/// exceeds the smallest mistake_bound among still-consistent concepts.
AdversaryReport exhaustive_adversary(const OnlineLearner& prototype,
                                     std::span<const BitString> probe,
                                     std::span<const ProbeConcept> concepts, std::size_t max_len);

/// Label masks of `concepts` over `probe` (at most 64 points).
template <Labeler F>
std::vector<std::uint64_t> probe_masks(std::span<const F> concepts,
                                       std::span<const BitString> probe);

struct LdimResult {
  std::size_t value = 0;
  /// value hit the depth cap, so the true dimension is at least value.
  bool truncated = false;
  std::uint64_t nodes = 0;
};

/// Optimal mistake bound by minimax over version spaces, cut at `depth`.
/// Throws BudgetExceeded past 16 probe points or depth 3 unless raised.
LdimResult ldim_oracle(std::span<const std::uint64_t> masks, std::size_t points,
                       std::size_t depth = 3, std::size_t max_points = 16,
                       std::size_t max_depth = 3);

struct OnlineToPac {
  std::size_t sample_size = 0;
  BatchLearner learner;
};

/// ceil(kappa * (mistake_bound + ln(1/delta)) / eps).
std::size_t online_to_pac_size(std::size_t mistake_bound, double eps, double delta,
                               double kappa = 20.0);

/// Runs a copy of `prototype` over the sample and returns the hypothesis with
/// the longest run of correct predictions.
OnlineToPac online_to_pac(const OnlineLearner& prototype, std::size_t mistake_bound, double eps,
                          double delta, double kappa = 20.0);

// ---------------------------------------------------------------------------

template <Labeler F>
std::vector<std::uint64_t> probe_masks(std::span<const F> concepts,
                                       std::span<const BitString> probe) {
  if (probe.size() > 64) throw BudgetExceeded("probe domain larger than 64 points");
  std::vector<std::uint64_t> out;
  out.reserve(concepts.size());
  for (const auto& c : concepts) {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < probe.size(); ++j) {
      if (c(probe[j])) mask |= std::uint64_t{1} << j;
    }
    out.push_back(mask);
  }
  return out;
}

}  // namespace certlearn
