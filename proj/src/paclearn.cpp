#include "certlearn/paclearn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "certlearn/errors.hpp"

namespace certlearn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Distribution::Distribution(std::vector<BitString> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.size() != weights_.size()) {
    throw ConfigError("distribution support and weights differ in size");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    if (support_[k].size() != support_.front().size()) {
      throw ConfigError("distribution support points differ in length");
    }
    if (!(weights_[k] >= 0.0)) throw ConfigError("distribution weight is negative");
    total += weights_[k];
    cumulative_.push_back(total);
  }
  if (!support_.empty() && std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("distribution weights do not sum to 1");
  }
}

Distribution Distribution::uniform(std::vector<BitString> support) {
  std::vector<double> w(support.size(), support.empty() ? 0.0 : 1.0 / support.size());
  return Distribution(std::move(support), std::move(w));
}

Distribution Distribution::point_mass(BitString x) { return Distribution({std::move(x)}, {1.0}); }

const BitString& Distribution::draw(Rng& rng) const {
  if (support_.empty()) throw ConfigError("cannot sample from an empty distribution");
  const double u = rng.unit() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return support_[static_cast<std::size_t>(it - cumulative_.begin())];
}

bool PointTable::operator()(const BitString& x) const { return std::ranges::binary_search(ones, x); }

bool JuntaTable::operator()(const BitString& x) const {
  if (x.size() < offset + index_bits) throw ShapeError("example shorter than the junta index");
  return table[x.read_uint(offset, index_bits)];
}

bool Hypothesis::operator()(const BitString& x) const {
  return std::visit([&](const auto& h) { return static_cast<bool>(h(x)); }, repr_);
}

std::size_t Hypothesis::size() const {
  struct Size {
    std::size_t operator()(const ConstantHypothesis&) const { return 1; }
    std::size_t operator()(const PointTable& t) const { return t.ones.size(); }
    std::size_t operator()(const JuntaTable& t) const { return t.table.size(); }
    std::size_t operator()(const DecisionTree& t) const { return t.size(); }
  };
  return std::visit(Size{}, repr_);
}

std::string Hypothesis::kind() const {
  static constexpr const char* names[] = {"constant", "point_table", "junta", "tree"};
  return names[repr_.index()];
}

double empirical_error(const LabeledSample& s, const Hypothesis& h) {
  if (s.pairs.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const auto& [x, y] : s.pairs) wrong += h(x) != y;
  return static_cast<double>(wrong) / static_cast<double>(s.m());
}

LearnerReport few_sample_learner(const LabeledSample& s, const Verifier& v, const CodeParams& code,
                                 const OracleBudget& budget) {
  const auto start = Clock::now();
  LearnerReport out;
  out.samples_used = s.m();
  out.steps = s.m();
  const BitString* z = nullptr;
  for (const auto& [x, y] : s.pairs) {
    if (!y) continue;
    if (x.size() < v.n()) throw ShapeError("example shorter than the instance prefix");
    if (!z) {
      z = &x;
    } else if (x.slice(0, v.n()) != z->slice(0, v.n())) {
      throw DataInconsistency("1-labeled examples carry different instance prefixes");
    }
  }
  if (z) {
    const CertConcept target(v, z->slice(0, v.n()), code, budget);
    out.steps += target.search_cost().verifier_steps;
    auto tree = build_decision_tree(target);
    out.steps += tree.node_count();
    out.hypothesis = Hypothesis(std::move(tree));
  }
  out.elapsed_seconds = seconds_since(start);
  return out;
}

LearnerReport sparse_erm(const LabeledSample& s) {
  const auto start = Clock::now();
  LearnerReport out;
  out.samples_used = s.m();
  std::uint64_t comparisons = 0;
  std::vector<std::size_t> order(s.m());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::sort(order, [&](std::size_t a, std::size_t b) {
    ++comparisons;
    const auto& pa = s.pairs[a];
    const auto& pb = s.pairs[b];
    if (pa.point != pb.point) return pa.point < pb.point;
    return pa.label < pb.label;
  });
  PointTable table;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& cur = s.pairs[order[k]];
    if (k > 0) {
      const auto& prev = s.pairs[order[k - 1]];
      if (prev.point == cur.point) {
        if (prev.label != cur.label) {
          throw DataInconsistency("sample labels one point both 0 and 1");
        }
        continue;
      }
    }
    if (cur.label) table.ones.push_back(cur.point);
  }
  out.steps = s.m() + comparisons;
  if (table.ones.empty()) {
    out.hypothesis = Hypothesis(ConstantHypothesis{false});
  } else {
    out.hypothesis = Hypothesis(std::move(table));
  }
  out.elapsed_seconds = seconds_since(start);
  return out;
}

LearnerReport junta_learner(const LabeledSample& s, const ExampleLayout& layout) {
  const auto start = Clock::now();
  LearnerReport out;
  out.samples_used = s.m();
  out.steps = s.m();
  JuntaTable table;
  table.offset = layout.kind == LayoutKind::standard ? layout.n : 0;
  table.index_bits = layout.index_bits;
  table.table = BitString(layout.index_count());
  BitString seen(layout.index_count());
  for (const auto& [x, y] : s.pairs) {
    const auto i = layout.index_of(x);
    if (seen[i] && table.table[i] != y) {
      throw DataInconsistency("sample labels one index both 0 and 1");
    }
    seen.set(i, true);
    table.table.set(i, y);
  }
  if (table.table.is_zero()) {
    out.hypothesis = Hypothesis(ConstantHypothesis{false});
  } else {
    out.hypothesis = Hypothesis(std::move(table));
  }
  out.elapsed_seconds = seconds_since(start);
  return out;
}

LearnerReport erm_learner(std::span<const EnumeratedConcept> cls, const LabeledSample& s) {
  const auto start = Clock::now();
  LearnerReport out;
  out.samples_used = s.m();
  for (const auto& entry : cls) {
    bool consistent = true;
    for (const auto& [x, y] : s.pairs) {
      ++out.steps;
      if (dt_eval(entry.tree, x) != y) {
        consistent = false;
        break;
      }
    }
    if (consistent) {
      out.hypothesis = Hypothesis(entry.tree);
      out.elapsed_seconds = seconds_since(start);
      return out;
    }
  }
  throw DataInconsistency("no enumerated concept is consistent with the sample");
}

BatchLearner make_few_sample_learner(const Verifier& v, const CodeParams& code,
                                     OracleBudget budget) {
  return [&v, code, budget](const LabeledSample& s, Rng&) {
    return few_sample_learner(s, v, code, budget);
  };
}

BatchLearner make_sparse_erm() {
  return [](const LabeledSample& s, Rng&) { return sparse_erm(s); };
}

BatchLearner make_junta_learner(const ExampleLayout& layout) {
  return [layout](const LabeledSample& s, Rng&) { return junta_learner(s, layout); };
}

std::vector<NamedDistribution> distribution_suite(const CertConcept& target) {
  const auto& layout = target.layout();
  std::vector<BitString> useful;
  for (std::uint64_t i = 0; i < layout.useful; ++i) useful.push_back(layout.example(target.z(), i));
  BitString other = target.z();
  if (other.size() > 0) other.flip(0);
  const BitString useless = layout.example(other, 0);

  std::vector<NamedDistribution> out;
  out.push_back({"uniform_useful", Distribution::uniform(useful)});
  {
    std::vector<BitString> support{useless};
    std::vector<double> weights{0.9};
    for (const auto& x : useful) {
      support.push_back(x);
      weights.push_back(0.1 / static_cast<double>(useful.size()));
    }
    out.push_back({"useless_heavy", Distribution(std::move(support), std::move(weights))});
  }
  for (std::uint64_t i = 0; i < layout.useful; ++i) {
    if (target.label_at(i)) {
      out.push_back({"point_one", Distribution::point_mass(useful[i])});
      break;
    }
  }
  for (std::uint64_t i = 0; i < layout.useful; ++i) {
    if (!target.label_at(i)) {
      out.push_back({"point_zero", Distribution::point_mass(useful[i])});
      break;
    }
  }
  out.push_back({"point_useless", Distribution::point_mass(useless)});
  return out;
}

std::size_t few_sample_size(double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("eps and delta must lie in (0, 1)");
  }
  return static_cast<std::size_t>(std::ceil(std::log(1.0 / delta) / eps - 1e-9));
}

std::size_t sparse_erm_size(std::size_t sparsity, double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("eps and delta must lie in (0, 1)");
  }
  const double bound = (static_cast<double>(sparsity) * std::log(2.0) + std::log(1.0 / delta)) / eps;
  return static_cast<std::size_t>(std::ceil(bound - 1e-9));
}

namespace {

double log_binomial_pmf(std::size_t n, double q, std::size_t k) {
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  double out = std::lgamma(dn + 1) - std::lgamma(dk + 1) - std::lgamma(dn - dk + 1);
  if (k > 0) out += dk * std::log(q);
  if (k < n) out += (dn - dk) * std::log1p(-q);
  return out;
}

double binomial_pmf(std::size_t n, double q, std::size_t k) {
  if (q <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_binomial_pmf(n, q, k));
}

}  // namespace

double binomial_upper_tail(std::size_t n, double q, std::size_t k) {
  double total = 0.0;
  for (std::size_t j = k; j <= n; ++j) total += binomial_pmf(n, q, j);
  return std::min(total, 1.0);
}

double binomial_lower_tail(std::size_t n, double q, std::size_t k) {
  double total = 0.0;
  for (std::size_t j = 0; j <= std::min(k, n); ++j) total += binomial_pmf(n, q, j);
  return std::min(total, 1.0);
}

}  // namespace certlearn
