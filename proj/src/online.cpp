#include "certlearn/online.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "certlearn/errors.hpp"

namespace certlearn {

SingleMistakeLearner::SingleMistakeLearner(const Verifier& v, const CodeParams& code,
                                           OracleBudget budget)
    : v_(&v), code_(code), budget_(budget) {}

bool SingleMistakeLearner::predict(const BitString& x) {
  ++steps_;
  return target_ ? (*target_)(x) : false;
}

void SingleMistakeLearner::observe(const BitString& x, bool label, bool) {
  if (target_) {
    if ((*target_)(x) != label) {
      throw AdversaryInconsistency("label contradicts the identified concept");
    }
    return;
  }
  if (!label) return;
  if (x.size() < v_->n()) throw ShapeError("example shorter than the instance prefix");
  // Exhaustive certificate search for the revealed z.
  target_ = std::make_shared<const CertConcept>(*v_, x.slice(0, v_->n()), code_, budget_);
  steps_ += target_->search_cost().verifier_steps;
  if (!(*target_)(x)) {
    throw AdversaryInconsistency("no Cert_z labels this point 1");
  }
}

Hypothesis SingleMistakeLearner::hypothesis() const {
  if (!target_) return Hypothesis(ConstantHypothesis{false});
  return Hypothesis(build_decision_tree(*target_));
}

std::unique_ptr<OnlineLearner> SingleMistakeLearner::clone() const {
  return std::make_unique<SingleMistakeLearner>(*this);
}

bool SortedListLearner::predict(const BitString& x) {
  // Binary search with an explicit comparison count.
  std::size_t lo = 0;
  std::size_t hi = list_.size();
  last_comparisons_ = 0;
  bool found = false;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++last_comparisons_;
    const auto order = list_[mid] <=> x;
    if (order == 0) {
      found = true;
      break;
    }
    if (order < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  comparisons_ += last_comparisons_;
  return found;
}

void SortedListLearner::observe(const BitString& x, bool label, bool predicted) {
  if (predicted == label) return;
  if (!label) throw AdversaryInconsistency("a point labeled 1 earlier is now labeled 0");
  list_.insert(std::ranges::lower_bound(list_, x), x);
}

Hypothesis SortedListLearner::hypothesis() const {
  if (list_.empty()) return Hypothesis(ConstantHypothesis{false});
  return Hypothesis(PointTable{list_});
}

std::unique_ptr<OnlineLearner> SortedListLearner::clone() const {
  return std::make_unique<SortedListLearner>(*this);
}

OnlineRunLog run_online(OnlineLearner& learner, std::span<const LabeledExample> sequence) {
  using Clock = std::chrono::steady_clock;
  OnlineRunLog log;
  for (const auto& [x, y] : sequence) {
    const auto start = Clock::now();
    OnlineRound round;
    round.point = x;
    round.prediction = learner.predict(x);
    round.true_label = y;
    round.mistake = round.prediction != y;
    learner.observe(x, y, round.prediction);
    round.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    log.mistakes += round.mistake;
    log.rounds.push_back(std::move(round));
  }
  return log;
}

namespace {

struct AdversarySearch {
  std::span<const BitString> probe;
  std::span<const ProbeConcept> concepts;
  std::size_t max_len;
  AdversaryReport report;
  std::vector<LabeledExample> path;

  void run(const OnlineLearner& learner, const std::vector<std::uint32_t>& version,
           std::size_t mistakes) {
    std::size_t bound = std::numeric_limits<std::size_t>::max();
    for (auto c : version) bound = std::min(bound, concepts[c].mistake_bound);
    if (mistakes > bound) ++report.violations;
    if (mistakes > report.max_mistakes) {
      report.max_mistakes = mistakes;
      report.worst = path;
    }
    if (path.size() == max_len) return;
    std::vector<std::uint32_t> next;
    for (std::size_t j = 0; j < probe.size(); ++j) {
      for (int b = 0; b < 2; ++b) {
        next.clear();
        for (auto c : version) {
          if (((concepts[c].mask >> j) & 1U) == static_cast<unsigned>(b)) next.push_back(c);
        }
        if (next.empty()) continue;
        ++report.sequences;
        auto child = learner.clone();
        const bool label = b == 1;
        const bool predicted = child->predict(probe[j]);
        child->observe(probe[j], label, predicted);
        path.push_back({probe[j], label});
        run(*child, next, mistakes + (predicted != label));
        path.pop_back();
      }
    }
  }
};

}  // namespace

AdversaryReport exhaustive_adversary(const OnlineLearner& prototype,
                                     std::span<const BitString> probe,
                                     std::span<const ProbeConcept> concepts, std::size_t max_len) {
  if (probe.size() > 64) throw BudgetExceeded("probe domain larger than 64 points");
  if (concepts.empty()) throw ConfigError("adversary needs a nonempty concept set");
  AdversarySearch search{probe, concepts, max_len, {}, {}};
  std::vector<std::uint32_t> all(concepts.size());
  for (std::uint32_t c = 0; c < all.size(); ++c) all[c] = c;
  search.run(prototype, all, 0);
  return search.report;
}

namespace {

std::size_t ldim_search(const std::vector<std::uint64_t>& version, std::size_t points,
                        std::size_t depth, std::uint64_t& nodes) {
  ++nodes;
  if (depth == 0 || version.size() < 2) return 0;
  std::size_t best = 0;
  std::vector<std::uint64_t> zero;
  std::vector<std::uint64_t> one;
  for (std::size_t j = 0; j < points && best < depth; ++j) {
    zero.clear();
    one.clear();
    for (auto mask : version) ((mask >> j) & 1U ? one : zero).push_back(mask);
    if (zero.empty() || one.empty()) continue;
    // The adversary answers whichever label the learner did not predict and
    // keeps the better branch for itself; the learner predicts to minimize.
    const std::size_t value = 1 + std::min(ldim_search(zero, points, depth - 1, nodes),
                                           ldim_search(one, points, depth - 1, nodes));
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

LdimResult ldim_oracle(std::span<const std::uint64_t> masks, std::size_t points,
                       std::size_t depth, std::size_t max_points, std::size_t max_depth) {
  if (points > max_points || points > 64) {
    throw BudgetExceeded("Littlestone oracle limited to " + std::to_string(max_points) +
                         " probe points");
  }
  if (depth > max_depth) {
    throw BudgetExceeded("Littlestone oracle limited to depth " + std::to_string(max_depth));
  }
  if (masks.empty()) throw ConfigError("Littlestone dimension of an empty class");
  std::vector<std::uint64_t> version(masks.begin(), masks.end());
  std::ranges::sort(version);
  version.erase(std::unique(version.begin(), version.end()), version.end());
  LdimResult out;
  out.value = ldim_search(version, points, depth, out.nodes);
  out.truncated = depth > 0 && out.value == depth;
  return out;
}

std::size_t online_to_pac_size(std::size_t mistake_bound, double eps, double delta,
                               double kappa) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) || !(kappa > 0.0)) {
    throw ConfigError("online-to-PAC needs eps, delta in (0, 1) and kappa > 0");
  }
  const double m = kappa * (static_cast<double>(mistake_bound) + std::log(1.0 / delta)) / eps;
  return static_cast<std::size_t>(std::ceil(m - 1e-9));
}

OnlineToPac online_to_pac(const OnlineLearner& prototype, std::size_t mistake_bound, double eps,
                          double delta, double kappa) {
  OnlineToPac out;
  out.sample_size = online_to_pac_size(mistake_bound, eps, delta, kappa);
  std::shared_ptr<const OnlineLearner> proto = prototype.clone();
  out.learner = [proto](const LabeledSample& s, Rng&) {
    const auto start = std::chrono::steady_clock::now();
    auto learner = proto->clone();
    Hypothesis current = learner->hypothesis();
    Hypothesis best = current;
    std::size_t run = 0;
    std::size_t best_run = 0;
    for (const auto& [x, y] : s.pairs) {
      const bool predicted = learner->predict(x);
      if (predicted == y) {
        ++run;
        continue;
      }
      if (run > best_run) {
        best_run = run;
        best = current;
      }
      // Conservative: state changes only on mistakes.
      learner->observe(x, y, predicted);
      current = learner->hypothesis();
      run = 0;
    }
    if (run > best_run || s.pairs.empty()) best = current;
    LearnerReport report;
    report.hypothesis = std::move(best);
    report.samples_used = s.m();
    report.steps = s.m() + learner->steps();
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };
  return out;
}

}  // namespace certlearn
