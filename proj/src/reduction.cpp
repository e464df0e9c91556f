#include "certlearn/reduction.hpp"

#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "certlearn/errors.hpp"

namespace certlearn {

namespace {

// Draws shared by every label string of one round.
struct RoundDraws {
  LayoutKind kind = LayoutKind::standard;
  ExampleLayout layout;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> indices;
  std::vector<BitString> bodies;
  BitString probe_body;
  std::vector<BitString> points;
  Rng rng{0};  // state after the draws, handed to the learner
};

RoundDraws draw_round(LayoutKind kind, const BitString& z, const Verifier& v,
                      const CodeParams& code, std::size_t m, std::uint64_t seed) {
  if (z.size() != v.n()) throw ShapeError("instance length differs from the verifier's n");
  if (!code.supports(v.p())) {
    throw ConfigError("code does not support certificate length " + std::to_string(v.p()));
  }
  RoundDraws d;
  d.kind = kind;
  d.layout = ExampleLayout::make(kind, v.n(), v.p(), code.c);
  d.seed = seed;
  d.rng = Rng(seed);
  d.indices.reserve(m);
  d.points.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto i = d.rng.below(d.layout.index_count());
    d.indices.push_back(i);
    if (kind == LayoutKind::uniform) {
      d.bodies.push_back(d.rng.bits(v.n()));
      d.points.push_back(d.layout.example(d.bodies.back(), i));
    } else {
      d.points.push_back(d.layout.example(z, i));
    }
  }
  if (kind == LayoutKind::uniform) d.probe_body = d.rng.bits(v.n());
  return d;
}

struct Outcome {
  BitString decoded;
  bool verdict = false;
};

// Decoding and verification depend only on the decoded window of y.
class VerdictCache {
 public:
  VerdictCache(const BitString& z, const Verifier& v, const CodeParams& code)
      : z_(z), v_(v), code_(code) {}

  const Outcome& get(const BitString& y) {
    if (y.size() > 64) {
      scratch_ = compute(y);
      return scratch_;
    }
    const auto key = y.to_uint();
    auto it = memo_.find(key);
    if (it == memo_.end()) it = memo_.emplace(key, compute(y)).first;
    return it->second;
  }

 private:
  Outcome compute(const BitString& y) const {
    Outcome o;
    o.decoded = decode(code_, y);
    o.verdict = verify(v_, z_, o.decoded);
    return o;
  }

  const BitString& z_;
  const Verifier& v_;
  const CodeParams& code_;
  std::unordered_map<std::uint64_t, Outcome> memo_;
  Outcome scratch_;
};

AmTranscript finish_round(const RoundDraws& d, const BitString& z, const BatchLearner& learner,
                          const BitString& labels, VerdictCache& cache) {
  AmTranscript t;
  t.kind = d.kind;
  t.seed = d.seed;
  t.indices = d.indices;
  t.bodies = d.bodies;
  t.probe_body = d.probe_body;
  t.merlin_labels = labels;

  LabeledSample s;
  s.pairs.reserve(d.points.size());
  for (std::size_t j = 0; j < d.points.size(); ++j) s.pairs.push_back({d.points[j], labels[j]});
  Rng rng = d.rng;
  try {
    auto report = learner(s, rng);
    t.hypothesis = std::move(report.hypothesis);
    t.learner_steps = report.steps;
  } catch (const std::runtime_error& e) {
    // A failed learner is a rejection; soundness is unaffected.
    t.learner_failed = true;
    t.failure = e.what();
    return t;
  }

  const auto& body = d.kind == LayoutKind::standard ? z : d.probe_body;
  t.query = BitString(d.layout.index_count());
  for (std::uint64_t i = 0; i < d.layout.index_count(); ++i) {
    t.query.set(i, t.hypothesis(d.layout.example(body, i)));
  }
  t.query_steps = d.layout.index_count();
  const auto& outcome = cache.get(t.query.slice(0, d.layout.useful));
  t.decoded = outcome.decoded;
  t.verdict = outcome.verdict;
  return t;
}

BitString merlin_answer(const MerlinStrategy& merlin, const CodewordConcept* honest,
                        const RoundDraws& d) {
  if (std::holds_alternative<ExhaustiveMerlin>(merlin)) {
    throw ConfigError("an exhaustive Merlin is only meaningful inside rtime_decide");
  }
  if (const auto* fixed = std::get_if<FixedProof>(&merlin)) {
    if (fixed->labels.size() != d.indices.size()) {
      throw ConfigError("fixed proof must have exactly m labels");
    }
    return fixed->labels;
  }
  return honest_labels(*honest, d.indices);
}

}  // namespace

std::string AmTranscript::digest() const {
  std::ostringstream out;
  char seed_hex[17];
  std::snprintf(seed_hex, sizeof seed_hex, "%016llx", static_cast<unsigned long long>(seed));
  out << "seed=" << seed_hex << " kind=" << (kind == LayoutKind::standard ? "standard" : "uniform")
      << " indices=";
  for (std::size_t j = 0; j < indices.size(); ++j) out << (j ? "," : "") << indices[j];
  out << " labels=" << merlin_labels.to_string()
      << " w=" << (decoded.empty() ? std::string("-") : decoded.to_hex())
      << " verdict=" << (verdict ? 1 : 0);
  if (learner_failed) out << " learner_failed=1";
  return out.str();
}

BitString honest_labels(const CodewordConcept& target, std::span<const std::uint64_t> indices) {
  BitString out(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) out.set(j, target.label_at(indices[j]));
  return out;
}

AmTranscript am_round(const BitString& z, const Verifier& v, const BatchLearner& learner,
                      std::size_t m, const MerlinStrategy& merlin, const CodeParams& code,
                      std::uint64_t seed) {
  const auto d = draw_round(LayoutKind::standard, z, v, code, m, seed);
  std::optional<CertConcept> target;
  if (std::holds_alternative<HonestMerlin>(merlin)) target.emplace(v, z, code);
  VerdictCache cache(z, v, code);
  return finish_round(d, z, learner, merlin_answer(merlin, target ? &*target : nullptr, d), cache);
}

AmTranscript am_round_uniform(const BitString& z, const Verifier& v, const BatchLearner& learner,
                              std::size_t m, const MerlinStrategy& merlin,
                              const CodeParams& code, std::uint64_t seed) {
  const auto d = draw_round(LayoutKind::uniform, z, v, code, m, seed);
  std::optional<UnifCertConcept> target;
  if (std::holds_alternative<HonestMerlin>(merlin)) target.emplace(v, z, code);
  VerdictCache cache(z, v, code);
  return finish_round(d, z, learner, merlin_answer(merlin, target ? &*target : nullptr, d), cache);
}

void DeciderConfig::validate() const {
  code.validate();
  if (repetitions == 0) throw ConfigError("decider needs at least one repetition");
  if (!learner) throw ConfigError("decider needs a learner");
  if (m >= 64 || (std::uint64_t{1} << m) > enumeration_cap) {
    throw BudgetExceeded("2^" + std::to_string(m) + " proofs exceed the enumeration cap of " +
                         std::to_string(enumeration_cap));
  }
}

double DeciderConfig::error_target() const {
  return uniform ? code.eps_star.value() / 100.0 : code.eps_star.value();
}

std::size_t DecisionReport::accepting_repetitions() const {
  std::size_t n = 0;
  for (const auto& r : repetitions) n += r.accepted;
  return n;
}

std::vector<std::string> DecisionReport::digests() const {
  std::vector<std::string> out;
  out.reserve(repetitions.size());
  for (const auto& r : repetitions) {
    out.push_back(r.witness.digest() + " proofs=" + std::to_string(r.proofs) +
                  " accepting=" + std::to_string(r.accepting_proofs));
  }
  return out;
}

DecisionReport rtime_decide(const BitString& z, const Verifier& v, const DeciderConfig& config) {
  config.validate();
  const auto kind = config.uniform ? LayoutKind::uniform : LayoutKind::standard;
  const std::uint64_t proofs = std::uint64_t{1} << config.m;
  DecisionReport report;
  VerdictCache cache(z, v, config.code);
  for (std::size_t t = 0; t < config.repetitions; ++t) {
    RepetitionRecord rec;
    rec.seed = Rng::derive(config.seed, t);
    const auto d = draw_round(kind, z, v, config.code, config.m, rec.seed);
    for (std::uint64_t proof = 0; proof < proofs; ++proof) {
      auto tr = finish_round(d, z, config.learner, BitString::from_uint(proof, config.m), cache);
      ++rec.proofs;
      if (tr.verdict) {
        ++rec.accepting_proofs;
        if (!rec.accepted) {
          rec.accepted = true;
          rec.witness = std::move(tr);
        }
        if (config.stop_at_first_accept) break;
      } else if (proof == 0) {
        rec.witness = std::move(tr);
      }
    }
    report.proofs += rec.proofs;
    report.accepted = report.accepted || rec.accepted;
    report.repetitions.push_back(std::move(rec));
  }
  return report;
}

DecisionReport sat_decider(const ThreeSatInstance& f, const ThreeSatVerifier& v,
                           const DeciderConfig& config) {
  return rtime_decide(v.encode(f), v, config);
}

}  // namespace certlearn
