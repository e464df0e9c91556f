#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "certlearn/paclearn.hpp"
#include "certlearn/three_sat.hpp"

namespace certlearn {

/// Answers with the true labels, computed from the first certificate.
struct HonestMerlin {};
/// A fixed label string; its length must equal the sample budget m.
struct FixedProof {
  BitString labels;
};
/// Tells the decider to try all 2^m label strings.
struct ExhaustiveMerlin {};

using MerlinStrategy = std::variant<HonestMerlin, FixedProof, ExhaustiveMerlin>;

/// Everything one protocol round saw. For the standard protocol the sample
/// points are (z, i_j); for the uniform one they are (i_j, bodies_j) and the
/// hypothesis is queried on (i, probe_body) for every index i.
struct AmTranscript {
  LayoutKind kind = LayoutKind::standard;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> indices;
  std::vector<BitString> bodies;
  BitString probe_body;
  BitString merlin_labels;
  Hypothesis hypothesis;
  BitString query;    // 2^l hypothesis values; the first c*p are decoded
  BitString decoded;  // candidate certificate
  bool verdict = false;
  bool learner_failed = false;
  std::string failure;
  std::uint64_t learner_steps = 0;
  std::uint64_t query_steps = 0;

  /// One line: seed, indices, labels, decoded certificate in hex, verdict.
  std::string digest() const;
};

/// Standard protocol. Draw order from Rng(seed): the m indices, then the
/// learner's own draws. Learner exceptions become a rejecting transcript.
/// Throws ConfigError for an exhaustive strategy or a proof of the wrong
/// length, and when the code does not support p.
AmTranscript am_round(const BitString& z, const Verifier& v, const BatchLearner& learner,
                      std::size_t m, const MerlinStrategy& merlin, const CodeParams& code,
                      std::uint64_t seed);

/// Uniform protocol. Draw order: m (index, body) pairs, each index then its
/// body; the single probe body; then the learner.
AmTranscript am_round_uniform(const BitString& z, const Verifier& v, const BatchLearner& learner,
                              std::size_t m, const MerlinStrategy& merlin,
                              const CodeParams& code, std::uint64_t seed);

/// Honest labels of the standard (or uniform) protocol for the given draws.
BitString honest_labels(const CodewordConcept& target, std::span<const std::uint64_t> indices);

struct DeciderConfig {
  std::size_t m = 12;
  std::size_t repetitions = 5;
  BatchLearner learner = make_sparse_erm();
  CodeParams code;
  std::uint64_t seed = 1;
  std::uint64_t enumeration_cap = std::uint64_t{1} << 16;
  bool uniform = false;
  /// Stop enumerating a repetition's proofs at its first accepting proof.
  bool stop_at_first_accept = true;

  /// Throws ConfigError for r = 0 and BudgetExceeded when 2^m > cap.
  void validate() const;
  /// Learner error the protocol relies on: eps* (standard) or eps*/100.
  double error_target() const;
};

struct RepetitionRecord {
  std::uint64_t seed = 0;
  bool accepted = false;
  std::uint64_t proofs = 0;
  std::uint64_t accepting_proofs = 0;
  /// The first accepting transcript, else the all-zero proof's.
  AmTranscript witness;
};

struct DecisionReport {
  bool accepted = false;
  std::uint64_t proofs = 0;
  std::vector<RepetitionRecord> repetitions;

  std::size_t accepting_repetitions() const;
  std::vector<std::string> digests() const;
};

/// Repetition t uses seed Rng::derive(config.seed, t). Within it, every
/// label string shares the same draws; the repetition accepts iff some
/// string yields verdict 1. Accepts iff any repetition accepts.
DecisionReport rtime_decide(const BitString& z, const Verifier& v, const DeciderConfig& config);

/// Encodes f for v and runs rtime_decide.
DecisionReport sat_decider(const ThreeSatInstance& f, const ThreeSatVerifier& v,
                           const DeciderConfig& config);

}  // namespace certlearn
