#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "certlearn/config.hpp"
#include "certlearn/corpus.hpp"
#include "certlearn/online.hpp"
#include "certlearn/reduction.hpp"

namespace certlearn {

enum class CorpusSource { exhaustive, random, dimacs };

struct CorpusConfig {
  CorpusSource source = CorpusSource::exhaustive;
  std::uint32_t vars = 2;     // exhaustive generator
  std::uint32_t clauses = 3;  // exhaustive generator
  RandomCorpusSpec random;
  std::vector<std::string> dimacs;
  bool unsat_only = false;
};

struct LearnConfig {
  std::vector<std::string> learners{"few_sample", "sparse_erm"};
  double eps = 0.1;
  double delta = 0.01;
  std::vector<std::uint64_t> budgets{0, 47, 157};
  std::uint64_t trials = 200;
  std::uint64_t max_targets = 0;  // 0 = every corpus formula
  /// Asserted on rows whose budget reaches the learner's sample bound.
  double min_success = 0.95;
};

struct DeciderSection {
  std::uint64_t m = 12;
  std::uint64_t repetitions = 5;
  std::uint64_t cap = std::uint64_t{1} << 16;
  std::string learner = "sparse_erm";
  bool uniform = false;
  bool stop_at_first_accept = true;
  /// When set, the accept rate on satisfiable formulas is asserted.
  std::optional<double> min_accept_rate;
};

struct TradeoffConfig {
  std::uint32_t p = 16;
  std::uint32_t clauses = 66;  // near the 3-SAT threshold at 16 variables
  std::uint64_t formulas = 4;
  std::uint64_t formula_seed = 7;
  std::vector<std::uint64_t> budgets{1, 4, 16, 47, 157, 500, 934};
  std::uint64_t trials = 10;
  double eps = 0.1;
  double min_factor = 100.0;
};

struct VcdimConfig {
  std::uint64_t probe_points = 8;
  std::uint64_t max_size = 5;
  std::uint64_t ldim_depth = 3;
  std::optional<std::uint64_t> expect_vc;
  std::optional<std::uint64_t> expect_ldim;
};

struct CodesConfig {
  std::vector<std::uint64_t> lengths{8};
  std::uint64_t max_patterns = 1000000;
  std::uint64_t random_patterns = 10000;
  std::uint64_t max_messages = 256;
};

struct ExperimentConfig {
  std::string verifier = "3sat";
  CorpusConfig corpus;
  CodeParams code;
  LearnConfig learn;
  DeciderSection decider;
  TradeoffConfig tradeoff;
  VcdimConfig vcdim;
  CodesConfig codes;
  std::optional<std::uint64_t> seed;
  std::string out;  // empty: write nothing

  /// Reads every recognized key; unknown keys and bad values throw
  /// ConfigError, as do violated invariants (see validate()).
  static ExperimentConfig from_config(const Config& c);
  /// Every field as a key, so from_config(to_config()) reproduces it.
  Config to_config() const;
  /// Files exist, budgets are within caps.
  void validate() const;
  /// Seed of randomized components; throws ConfigError when absent.
  std::uint64_t require_seed(const std::string& command) const;
};

std::vector<std::string> known_config_keys();

/// One per (learner, budget, batch). Wall-clock is kept out of the CSV.
struct TradeoffRow {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t m = 0;
  std::string learner;
  std::size_t trials = 0;
  double mean_error = 0.0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
  double elapsed_seconds = 0.0;
};

/// `%.6g`.
std::string format_number(double x);
std::string tradeoff_csv(const std::vector<TradeoffRow>& rows);
std::string timing_csv(const std::vector<TradeoffRow>& rows);

struct CommandResult {
  std::vector<std::string> report;
  std::vector<std::string> failures;
  std::vector<TradeoffRow> rows;
  bool ok() const { return failures.empty(); }
};

std::vector<ThreeSatInstance> load_corpus(const CorpusConfig& c);

struct RadiusReport {
  std::size_t message_len = 0;
  std::size_t codeword_len = 0;
  std::size_t radius = 0;
  std::uint64_t patterns_per_message = 0;  // weight <= radius, all of them
  bool exhaustive = false;
  std::uint64_t messages = 0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
};

/// Every message (or `max_messages` seeded ones) under every corruption of
/// weight <= contract radius when that count is <= max_patterns, else
/// `random_patterns` seeded patterns per message.
RadiusReport radius_check(const CodeParams& code, std::size_t m, std::uint64_t max_patterns,
                          std::uint64_t random_patterns, std::uint64_t max_messages,
                          std::uint64_t seed);

CommandResult cmd_enumerate(const ExperimentConfig& cfg);
CommandResult cmd_learn(const ExperimentConfig& cfg);
CommandResult cmd_reduce(const ExperimentConfig& cfg);
CommandResult cmd_tradeoff(const ExperimentConfig& cfg);
CommandResult cmd_vcdim(const ExperimentConfig& cfg);
CommandResult cmd_codes_test(const ExperimentConfig& cfg);

/// Formulas of `p` variables from the tradeoff generator, satisfiable ones.
std::vector<ThreeSatInstance> tradeoff_formulas(const TradeoffConfig& t);
/// Probe domain used by vcdim: one 1-point and one 0-point per concept with a
/// nonzero codeword, in order, until `points` are chosen.
std::vector<BitString> choose_probe(std::span<const CertConcept> concepts, std::size_t points);

}  // namespace certlearn
