#include "certlearn/harness.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "certlearn/errors.hpp"

namespace certlearn {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? "," : "") + items[k];
  return out;
}

std::string join(const std::vector<std::uint64_t>& items) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? "," : "") + std::to_string(items[k]);
  return out;
}

// Shortest text that reads back to the same double.
std::string exact_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string source_name(CorpusSource s) {
  switch (s) {
    case CorpusSource::exhaustive: return "exhaustive";
    case CorpusSource::random: return "random";
    case CorpusSource::dimacs: return "dimacs";
  }
  return "exhaustive";
}

CorpusSource parse_source(const std::string& s) {
  if (s == "exhaustive") return CorpusSource::exhaustive;
  if (s == "random") return CorpusSource::random;
  if (s == "dimacs") return CorpusSource::dimacs;
  throw ConfigError("corpus.source: expected exhaustive, random or dimacs, got '" + s + "'");
}

Rational parse_rational(const std::string& key, const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    return {static_cast<std::int64_t>(parse_u64(key, text)), 1};
  }
  const auto num = parse_u64(key, text.substr(0, slash));
  const auto den = parse_u64(key, text.substr(slash + 1));
  if (den == 0) throw ConfigError(key + ": zero denominator");
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::uint32_t narrow32(const std::string& key, std::uint64_t x) {
  if (x > 0xffffffffULL) throw ConfigError(key + ": value too large");
  return static_cast<std::uint32_t>(x);
}

const std::vector<std::string> kLearners{"few_sample", "sparse_erm", "online_pac", "junta",
                                         "constant_zero"};

struct LearnerChoice {
  BatchLearner learner;
  std::size_t sample_bound = 0;  // budget at which the success bound applies
};

LearnerChoice make_learner(const std::string& name, const Verifier& v, const CodeParams& code,
                           double eps, double delta, const OracleBudget& budget = {}) {
  if (name == "few_sample") {
    return {make_few_sample_learner(v, code, budget), few_sample_size(eps, delta)};
  }
  if (name == "sparse_erm") {
    return {make_sparse_erm(), sparse_erm_size(code.c * v.p(), eps, delta)};
  }
  if (name == "online_pac") {
    auto conv = online_to_pac(SingleMistakeLearner(v, code, budget), 1, eps, delta);
    return {std::move(conv.learner), conv.sample_size};
  }
  if (name == "junta") {
    const auto layout = ExampleLayout::make(LayoutKind::uniform, v.n(), v.p(), code.c);
    return {make_junta_learner(layout), 0};
  }
  if (name == "constant_zero") {
    return {[](const LabeledSample& s, Rng&) { return LearnerReport{Hypothesis{}, s.m(), 0, 0}; },
            0};
  }
  throw ConfigError("unknown learner '" + name + "'");
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + (std::filesystem::path(dir) / name).string());
  out << content;
}

std::string lines_of(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

void finish(const ExperimentConfig& cfg, const std::string& name, const CommandResult& r) {
  auto lines = r.report;
  for (const auto& f : r.failures) lines.push_back("FAIL " + f);
  lines.push_back(r.ok() ? "status ok" : "status failed");
  write_file(cfg.out, name + "_report.txt", lines_of(lines));
}

std::vector<CertConcept> concepts_of(const ThreeSatVerifier& v,
                                     const std::vector<ThreeSatInstance>& corpus,
                                     const CodeParams& code) {
  std::vector<CertConcept> out;
  out.reserve(corpus.size());
  for (const auto& f : corpus) out.emplace_back(v, v.encode(f), code);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<std::string> known_config_keys() {
  return {"verifier",
          "seed",
          "out",
          "corpus.source",
          "corpus.vars",
          "corpus.clauses",
          "corpus.unsat_only",
          "corpus.dimacs",
          "corpus.random.count",
          "corpus.random.min_vars",
          "corpus.random.max_vars",
          "corpus.random.clauses",
          "corpus.random.min_width",
          "corpus.random.max_width",
          "corpus.random.seed",
          "code.c",
          "code.eps_star",
          "learn.learners",
          "learn.eps",
          "learn.delta",
          "learn.budgets",
          "learn.trials",
          "learn.max_targets",
          "learn.min_success",
          "decider.m",
          "decider.r",
          "decider.cap",
          "decider.learner",
          "decider.uniform",
          "decider.stop_at_first_accept",
          "decider.min_accept_rate",
          "tradeoff.p",
          "tradeoff.clauses",
          "tradeoff.formulas",
          "tradeoff.formula_seed",
          "tradeoff.budgets",
          "tradeoff.trials",
          "tradeoff.eps",
          "tradeoff.min_factor",
          "vcdim.probe_points",
          "vcdim.max_size",
          "vcdim.ldim_depth",
          "vcdim.expect_vc",
          "vcdim.expect_ldim",
          "codes.lengths",
          "codes.max_patterns",
          "codes.random_patterns",
          "codes.max_messages"};
}

ExperimentConfig ExperimentConfig::from_config(const Config& c) {
  if (const auto unknown = c.unknown_keys(known_config_keys()); !unknown.empty()) {
    throw ConfigError("unknown config key '" + unknown.front() + "'");
  }
  ExperimentConfig e;
  e.verifier = c.get_string("verifier", e.verifier);
  if (c.has("seed")) e.seed = c.get_u64("seed", 0);
  e.out = c.get_string("out", e.out);

  auto& k = e.corpus;
  k.source = parse_source(c.get_string("corpus.source", source_name(k.source)));
  k.vars = narrow32("corpus.vars", c.get_u64("corpus.vars", k.vars));
  k.clauses = narrow32("corpus.clauses", c.get_u64("corpus.clauses", k.clauses));
  k.unsat_only = c.get_bool("corpus.unsat_only", k.unsat_only);
  k.dimacs = c.get_list("corpus.dimacs", k.dimacs);
  k.random.count = c.get_u64("corpus.random.count", k.random.count);
  k.random.min_vars = narrow32("corpus.random.min_vars",
                               c.get_u64("corpus.random.min_vars", k.random.min_vars));
  k.random.max_vars = narrow32("corpus.random.max_vars",
                               c.get_u64("corpus.random.max_vars", k.random.max_vars));
  k.random.clauses = narrow32("corpus.random.clauses",
                              c.get_u64("corpus.random.clauses", k.random.clauses));
  k.random.min_width = narrow32("corpus.random.min_width",
                                c.get_u64("corpus.random.min_width", k.random.min_width));
  k.random.max_width = narrow32("corpus.random.max_width",
                                c.get_u64("corpus.random.max_width", k.random.max_width));
  k.random.seed = c.get_u64("corpus.random.seed", k.random.seed);

  e.code.c = c.get_u64("code.c", e.code.c);
  if (c.has("code.eps_star")) {
    e.code.eps_star = parse_rational("code.eps_star", c.get_string("code.eps_star", ""));
  }

  auto& l = e.learn;
  l.learners = c.get_list("learn.learners", l.learners);
  l.eps = c.get_double("learn.eps", l.eps);
  l.delta = c.get_double("learn.delta", l.delta);
  l.budgets = c.get_u64_list("learn.budgets", l.budgets);
  l.trials = c.get_u64("learn.trials", l.trials);
  l.max_targets = c.get_u64("learn.max_targets", l.max_targets);
  l.min_success = c.get_double("learn.min_success", l.min_success);

  auto& d = e.decider;
  d.m = c.get_u64("decider.m", d.m);
  d.repetitions = c.get_u64("decider.r", d.repetitions);
  d.cap = c.get_u64("decider.cap", d.cap);
  d.learner = c.get_string("decider.learner", d.learner);
  d.uniform = c.get_bool("decider.uniform", d.uniform);
  d.stop_at_first_accept = c.get_bool("decider.stop_at_first_accept", d.stop_at_first_accept);
  d.min_accept_rate = c.find_double("decider.min_accept_rate");

  auto& t = e.tradeoff;
  t.p = narrow32("tradeoff.p", c.get_u64("tradeoff.p", t.p));
  t.clauses = narrow32("tradeoff.clauses", c.get_u64("tradeoff.clauses", t.clauses));
  t.formulas = c.get_u64("tradeoff.formulas", t.formulas);
  t.formula_seed = c.get_u64("tradeoff.formula_seed", t.formula_seed);
  t.budgets = c.get_u64_list("tradeoff.budgets", t.budgets);
  t.trials = c.get_u64("tradeoff.trials", t.trials);
  t.eps = c.get_double("tradeoff.eps", t.eps);
  t.min_factor = c.get_double("tradeoff.min_factor", t.min_factor);

  auto& vc = e.vcdim;
  vc.probe_points = c.get_u64("vcdim.probe_points", vc.probe_points);
  vc.max_size = c.get_u64("vcdim.max_size", vc.max_size);
  vc.ldim_depth = c.get_u64("vcdim.ldim_depth", vc.ldim_depth);
  if (c.has("vcdim.expect_vc")) vc.expect_vc = c.get_u64("vcdim.expect_vc", 0);
  if (c.has("vcdim.expect_ldim")) vc.expect_ldim = c.get_u64("vcdim.expect_ldim", 0);

  auto& cd = e.codes;
  cd.lengths = c.get_u64_list("codes.lengths", cd.lengths);
  cd.max_patterns = c.get_u64("codes.max_patterns", cd.max_patterns);
  cd.random_patterns = c.get_u64("codes.random_patterns", cd.random_patterns);
  cd.max_messages = c.get_u64("codes.max_messages", cd.max_messages);

  e.validate();
  return e;
}

Config ExperimentConfig::to_config() const {
  Config c;
  c.set("verifier", verifier);
  if (seed) c.set("seed", std::to_string(*seed));
  if (!out.empty()) c.set("out", out);
  c.set("corpus.source", source_name(corpus.source));
  c.set("corpus.vars", std::to_string(corpus.vars));
  c.set("corpus.clauses", std::to_string(corpus.clauses));
  c.set("corpus.unsat_only", corpus.unsat_only ? "true" : "false");
  if (!corpus.dimacs.empty()) c.set("corpus.dimacs", join(corpus.dimacs));
  c.set("corpus.random.count", std::to_string(corpus.random.count));
  c.set("corpus.random.min_vars", std::to_string(corpus.random.min_vars));
  c.set("corpus.random.max_vars", std::to_string(corpus.random.max_vars));
  c.set("corpus.random.clauses", std::to_string(corpus.random.clauses));
  c.set("corpus.random.min_width", std::to_string(corpus.random.min_width));
  c.set("corpus.random.max_width", std::to_string(corpus.random.max_width));
  c.set("corpus.random.seed", std::to_string(corpus.random.seed));
  c.set("code.c", std::to_string(code.c));
  c.set("code.eps_star", code.eps_star.to_string());
  c.set("learn.learners", join(learn.learners));
  c.set("learn.eps", exact_number(learn.eps));
  c.set("learn.delta", exact_number(learn.delta));
  c.set("learn.budgets", join(learn.budgets));
  c.set("learn.trials", std::to_string(learn.trials));
  c.set("learn.max_targets", std::to_string(learn.max_targets));
  c.set("learn.min_success", exact_number(learn.min_success));
  c.set("decider.m", std::to_string(decider.m));
  c.set("decider.r", std::to_string(decider.repetitions));
  c.set("decider.cap", std::to_string(decider.cap));
  c.set("decider.learner", decider.learner);
  c.set("decider.uniform", decider.uniform ? "true" : "false");
  c.set("decider.stop_at_first_accept", decider.stop_at_first_accept ? "true" : "false");
  if (decider.min_accept_rate) {
    c.set("decider.min_accept_rate", exact_number(*decider.min_accept_rate));
  }
  c.set("tradeoff.p", std::to_string(tradeoff.p));
  c.set("tradeoff.clauses", std::to_string(tradeoff.clauses));
  c.set("tradeoff.formulas", std::to_string(tradeoff.formulas));
  c.set("tradeoff.formula_seed", std::to_string(tradeoff.formula_seed));
  c.set("tradeoff.budgets", join(tradeoff.budgets));
  c.set("tradeoff.trials", std::to_string(tradeoff.trials));
  c.set("tradeoff.eps", exact_number(tradeoff.eps));
  c.set("tradeoff.min_factor", exact_number(tradeoff.min_factor));
  c.set("vcdim.probe_points", std::to_string(vcdim.probe_points));
  c.set("vcdim.max_size", std::to_string(vcdim.max_size));
  c.set("vcdim.ldim_depth", std::to_string(vcdim.ldim_depth));
  if (vcdim.expect_vc) c.set("vcdim.expect_vc", std::to_string(*vcdim.expect_vc));
  if (vcdim.expect_ldim) c.set("vcdim.expect_ldim", std::to_string(*vcdim.expect_ldim));
  c.set("codes.lengths", join(codes.lengths));
  c.set("codes.max_patterns", std::to_string(codes.max_patterns));
  c.set("codes.random_patterns", std::to_string(codes.random_patterns));
  c.set("codes.max_messages", std::to_string(codes.max_messages));
  return c;
}

void ExperimentConfig::validate() const {
  if (verifier != "3sat") throw ConfigError("verifier: only 3sat is available");
  code.validate();
  if (corpus.source == CorpusSource::dimacs) {
    if (corpus.dimacs.empty()) throw ConfigError("corpus.dimacs: no files listed");
    for (const auto& path : corpus.dimacs) {
      if (!std::filesystem::exists(path)) throw ConfigError("corpus.dimacs: no such file " + path);
    }
  }
  if (corpus.source == CorpusSource::exhaustive && (corpus.vars == 0 || corpus.vars > 3)) {
    throw ConfigError("corpus.vars: the exhaustive generator handles 1 to 3 variables");
  }
  if (!(learn.eps > 0 && learn.eps < 1) || !(learn.delta > 0 && learn.delta < 1)) {
    throw ConfigError("learn.eps and learn.delta must lie in (0, 1)");
  }
  if (learn.trials == 0) throw ConfigError("learn.trials must be positive");
  for (const auto& name : learn.learners) {
    if (std::ranges::find(kLearners, name) == kLearners.end()) {
      throw ConfigError("learn.learners: unknown learner '" + name + "'");
    }
  }
  for (auto m : learn.budgets) {
    if (m > 1000000) throw ConfigError("learn.budgets: budgets above 10^6 are refused");
  }
  if (std::ranges::find(kLearners, decider.learner) == kLearners.end()) {
    throw ConfigError("decider.learner: unknown learner '" + decider.learner + "'");
  }
  if (decider.repetitions == 0) throw ConfigError("decider.r must be at least 1");
  if (decider.m >= 64 || (std::uint64_t{1} << decider.m) > decider.cap) {
    throw ConfigError("decider.m: 2^m exceeds decider.cap");
  }
  if (!code.supports(tradeoff.p)) {
    throw ConfigError("tradeoff.p: the code does not support this certificate length");
  }
  if (tradeoff.p > 24) throw ConfigError("tradeoff.p: brute force is capped at 24 bits");
  if (tradeoff.budgets.empty()) throw ConfigError("tradeoff.budgets: empty grid");
  if (tradeoff.trials == 0 || tradeoff.formulas == 0) {
    throw ConfigError("tradeoff.trials and tradeoff.formulas must be positive");
  }
  if (vcdim.probe_points == 0 || vcdim.probe_points > 16 || vcdim.ldim_depth > 3) {
    throw ConfigError("vcdim: the Littlestone oracle allows at most 16 points and depth 3");
  }
  for (auto m : codes.lengths) {
    if (!code.supports(m)) {
      throw ConfigError("codes.lengths: unsupported message length " + std::to_string(m));
    }
  }
}

std::uint64_t ExperimentConfig::require_seed(const std::string& command) const {
  if (!seed) throw ConfigError(command + " is randomized: set 'seed' or pass --seed");
  return *seed;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string tradeoff_csv(const std::vector<TradeoffRow>& rows) {
  std::string out = "learner,n,p,m,trials,mean_error,success_rate,mean_steps\n";
  for (const auto& r : rows) {
    out += r.learner + "," + std::to_string(r.n) + "," + std::to_string(r.p) + "," +
           std::to_string(r.m) + "," + std::to_string(r.trials) + "," +
           format_number(r.mean_error) + "," + format_number(r.success_rate) + "," +
           format_number(r.mean_steps) + "\n";
  }
  return out;
}

std::string timing_csv(const std::vector<TradeoffRow>& rows) {
  std::string out = "learner,m,elapsed_seconds\n";
  for (const auto& r : rows) {
    out += r.learner + "," + std::to_string(r.m) + "," + format_number(r.elapsed_seconds) + "\n";
  }
  return out;
}

std::vector<ThreeSatInstance> load_corpus(const CorpusConfig& c) {
  std::vector<ThreeSatInstance> out;
  switch (c.source) {
    case CorpusSource::exhaustive: out = exhaustive_corpus(c.vars, c.clauses); break;
    case CorpusSource::random: out = random_corpus(c.random); break;
    case CorpusSource::dimacs: {
      std::vector<std::filesystem::path> paths(c.dimacs.begin(), c.dimacs.end());
      out = dimacs_corpus(paths);
      break;
    }
  }
  if (c.unsat_only) std::erase_if(out, [](const auto& f) { return brute_force_satisfiable(f); });
  if (out.empty()) throw ConfigError("corpus is empty");
  return out;
}

RadiusReport radius_check(const CodeParams& code, std::size_t m, std::uint64_t max_patterns,
                          std::uint64_t random_patterns, std::uint64_t max_messages,
                          std::uint64_t seed) {
  RadiusReport r;
  r.message_len = m;
  r.codeword_len = code.codeword_length(m);
  r.radius = code.contract_radius(m);
  std::uint64_t count = 0;
  double binom = 1.0;
  for (std::size_t w = 0; w <= r.radius; ++w) {
    if (w > 0) binom = binom * static_cast<double>(r.codeword_len - w + 1) / static_cast<double>(w);
    count += static_cast<std::uint64_t>(std::min(binom, 1e18));
  }
  r.patterns_per_message = count;
  r.exhaustive = count <= max_patterns;

  Rng rng(seed);
  std::vector<BitString> messages;
  if (m < 63 && (std::uint64_t{1} << m) <= max_messages) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
      messages.push_back(BitString::from_uint(x, m));
    }
  } else {
    for (std::uint64_t k = 0; k < max_messages; ++k) messages.push_back(rng.bits(m));
  }
  r.messages = messages.size();

  std::vector<std::size_t> pos(r.codeword_len);
  for (const auto& x : messages) {
    auto y = encode(code, x).bits;
    const auto check = [&] {
      ++r.trials;
      if (decode(code, y) != x) ++r.failures;
    };
    if (r.exhaustive) {
      // Every subset of size w, in lexicographic order of positions.
      for (std::size_t w = 0; w <= r.radius; ++w) {
        std::vector<std::size_t> c(w);
        for (std::size_t j = 0; j < w; ++j) c[j] = j;
        while (true) {
          for (auto q : c) y.flip(q);
          check();
          for (auto q : c) y.flip(q);
          std::size_t j = w;
          while (j > 0 && c[j - 1] == r.codeword_len - w + j - 1) --j;
          if (j == 0) break;
          ++c[j - 1];
          for (std::size_t t = j; t < w; ++t) c[t] = c[t - 1] + 1;
        }
      }
    } else {
      for (std::uint64_t t = 0; t < random_patterns; ++t) {
        const std::size_t w = r.radius == 0 ? 0 : 1 + rng.below(r.radius);
        for (std::size_t j = 0; j < r.codeword_len; ++j) pos[j] = j;
        for (std::size_t j = 0; j < w; ++j) std::swap(pos[j], pos[j + rng.below(pos.size() - j)]);
        for (std::size_t j = 0; j < w; ++j) y.flip(pos[j]);
        check();
        for (std::size_t j = 0; j < w; ++j) y.flip(pos[j]);
      }
    }
  }
  return r;
}

std::vector<ThreeSatInstance> tradeoff_formulas(const TradeoffConfig& t) {
  RandomCorpusSpec spec;
  spec.count = static_cast<std::size_t>(t.formulas) * 20;
  spec.min_vars = spec.max_vars = t.p;
  spec.clauses = t.clauses;
  spec.min_width = spec.max_width = std::min<std::uint32_t>(3, t.p);
  spec.seed = t.formula_seed;
  std::vector<ThreeSatInstance> out;
  for (auto& f : random_corpus(spec)) {
    if (out.size() == t.formulas) break;
    if (brute_force_satisfiable(f)) out.push_back(std::move(f));
  }
  if (out.size() < t.formulas) {
    throw ConfigError("tradeoff: too few satisfiable formulas; lower tradeoff.clauses");
  }
  return out;
}

std::vector<BitString> choose_probe(std::span<const CertConcept> concepts, std::size_t points) {
  std::vector<BitString> out;
  for (const auto& c : concepts) {
    if (out.size() >= points) break;
    if (c.sparsity() == 0) continue;
    const auto ones = c.one_points();
    if (std::ranges::find(out, ones.front()) == out.end()) out.push_back(ones.front());
    for (std::uint64_t i = 0; i < c.layout().index_count() && out.size() < points; ++i) {
      if (!c.label_at(i)) {
        const auto x = c.layout().example(c.z(), i);
        if (std::ranges::find(out, x) == out.end()) out.push_back(x);
        break;
      }
    }
  }
  if (out.size() > points) out.resize(points);
  return out;
}

CommandResult cmd_enumerate(const ExperimentConfig& cfg) {
  CommandResult r;
  const auto corpus = load_corpus(cfg.corpus);
  ThreeSatVerifier v(layout_for(corpus));
  std::vector<BitString> seeds;
  for (const auto& f : corpus) seeds.push_back(v.encode(f));
  const auto cls = enumerate_class(v, seeds, cfg.code);
  std::string trees;
  std::size_t max_size = 0;
  std::size_t unsat = 0;
  for (std::size_t k = 0; k < cls.size(); ++k) {
    const auto text = cls[k].tree.serialize();
    trees += std::to_string(k) + "\t" + text + "\n";
    max_size = std::max(max_size, cls[k].tree.size());
    if (DecisionTree::parse(text) != cls[k].tree) {
      r.failures.push_back("tree " + std::to_string(k) + " does not survive serialization");
    }
    if (!brute_force_satisfiable(corpus[k])) {
      ++unsat;
      if (cls[k].tree.size() != 1) {
        r.failures.push_back("unsatisfiable formula " + std::to_string(k) + " has a tree of size " +
                             std::to_string(cls[k].tree.size()));
      }
    }
  }
  if (cls.size() != corpus.size()) r.failures.push_back("tree count differs from corpus size");
  r.report.push_back("formulas " + std::to_string(corpus.size()));
  r.report.push_back("trees " + std::to_string(cls.size()));
  r.report.push_back("unsatisfiable " + std::to_string(unsat));
  r.report.push_back("n " + std::to_string(v.n()) + " p " + std::to_string(v.p()));
  r.report.push_back("max_tree_size " + std::to_string(max_size));
  write_file(cfg.out, "trees.txt", trees);
  finish(cfg, "enumerate", r);
  return r;
}

CommandResult cmd_learn(const ExperimentConfig& cfg) {
  CommandResult r;
  const auto seed = cfg.require_seed("learn");
  auto corpus = load_corpus(cfg.corpus);
  if (cfg.learn.max_targets && corpus.size() > cfg.learn.max_targets) {
    corpus.resize(cfg.learn.max_targets);
  }
  ThreeSatVerifier v(layout_for(corpus));
  const auto targets = concepts_of(v, corpus, cfg.code);
  std::vector<std::vector<NamedDistribution>> suites;
  for (const auto& t : targets) suites.push_back(distribution_suite(t));

  for (const auto& name : cfg.learn.learners) {
    const auto choice = make_learner(name, v, cfg.code, cfg.learn.eps, cfg.learn.delta);
    for (auto m : cfg.learn.budgets) {
      TradeoffRow row;
      row.n = v.n();
      row.p = v.p();
      row.m = m;
      row.learner = name;
      std::size_t successes = 0;
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t k = 0; k < targets.size(); ++k) {
        for (std::size_t d = 0; d < suites[k].size(); ++d) {
          // The same draws for every learner and budget.
          const auto s = pac_trial_suite(choice.learner, targets[k], suites[k][d].d,
                                         cfg.learn.eps, m, cfg.learn.trials,
                                         Rng::derive(seed, k * 16 + d));
          row.trials += s.trials;
          successes += s.successes;
          row.mean_error += s.mean_error * static_cast<double>(s.trials);
          row.mean_steps += s.mean_steps * static_cast<double>(s.trials);
        }
      }
      row.elapsed_seconds = seconds_since(start);
      if (row.trials) {
        row.success_rate = static_cast<double>(successes) / static_cast<double>(row.trials);
        row.mean_error /= static_cast<double>(row.trials);
        row.mean_steps /= static_cast<double>(row.trials);
      }
      if (choice.sample_bound && m >= choice.sample_bound &&
          row.success_rate < cfg.learn.min_success) {
        r.failures.push_back(name + " at m = " + std::to_string(m) + ": success " +
                             format_number(row.success_rate) + " < " +
                             format_number(cfg.learn.min_success));
      }
      r.report.push_back(name + " m=" + std::to_string(m) + " success=" +
                         format_number(row.success_rate) + " mean_error=" +
                         format_number(row.mean_error) + " bound=" +
                         std::to_string(choice.sample_bound));
      r.rows.push_back(row);
    }
  }
  write_file(cfg.out, "learn.csv", tradeoff_csv(r.rows));
  write_file(cfg.out, "learn_timing.csv", timing_csv(r.rows));
  finish(cfg, "learn", r);
  return r;
}

CommandResult cmd_reduce(const ExperimentConfig& cfg) {
  CommandResult r;
  const auto seed = cfg.require_seed("reduce");
  const auto corpus = load_corpus(cfg.corpus);
  ThreeSatVerifier v(layout_for(corpus));
  DeciderConfig dc;
  dc.m = cfg.decider.m;
  dc.repetitions = cfg.decider.repetitions;
  dc.enumeration_cap = cfg.decider.cap;
  dc.code = cfg.code;
  dc.seed = seed;
  dc.uniform = cfg.decider.uniform;
  dc.stop_at_first_accept = cfg.decider.stop_at_first_accept;
  dc.learner = make_learner(cfg.decider.learner, v, cfg.code, dc.error_target(), 1.0 / 3).learner;
  dc.validate();

  std::string csv = "formula,num_vars,clauses,satisfiable,accepted,accepting_repetitions,"
                    "repetitions,proofs\n";
  std::string transcripts;
  std::size_t sat = 0;
  std::size_t accepted_sat = 0;
  std::size_t false_accepts = 0;
  std::size_t agree = 0;
  std::uint64_t proofs = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const bool expect = brute_force_satisfiable(corpus[k]);
    const auto rep = sat_decider(corpus[k], v, dc);
    proofs += rep.proofs;
    sat += expect;
    accepted_sat += expect && rep.accepted;
    false_accepts += !expect && rep.accepted;
    agree += expect == rep.accepted;
    csv += std::to_string(k) + "," + std::to_string(corpus[k].num_vars) + "," +
           std::to_string(corpus[k].clauses.size()) + "," + (expect ? "1" : "0") + "," +
           (rep.accepted ? "1" : "0") + "," + std::to_string(rep.accepting_repetitions()) + "," +
           std::to_string(rep.repetitions.size()) + "," + std::to_string(rep.proofs) + "\n";
    for (const auto& d : rep.digests()) transcripts += std::to_string(k) + " " + d + "\n";
  }
  const double rate = sat ? static_cast<double>(accepted_sat) / static_cast<double>(sat) : 1.0;
  r.report.push_back(std::string("protocol ") + (dc.uniform ? "uniform" : "standard") +
                     " learner " + cfg.decider.learner);
  r.report.push_back("formulas " + std::to_string(corpus.size()) + " satisfiable " +
                     std::to_string(sat));
  r.report.push_back("agreement " + std::to_string(agree) + "/" + std::to_string(corpus.size()));
  r.report.push_back("false_accepts " + std::to_string(false_accepts));
  r.report.push_back("accept_rate_on_satisfiable " + format_number(rate));
  r.report.push_back("proofs_enumerated " + std::to_string(proofs));
  if (false_accepts) {
    r.failures.push_back("soundness: " + std::to_string(false_accepts) + " false accepts");
  }
  if (cfg.decider.min_accept_rate && rate < *cfg.decider.min_accept_rate) {
    r.failures.push_back("completeness: accept rate " + format_number(rate) + " < " +
                         format_number(*cfg.decider.min_accept_rate));
  }
  write_file(cfg.out, "reduce.csv", csv);
  write_file(cfg.out, "transcripts.txt", transcripts);
  finish(cfg, "reduce", r);
  return r;
}

CommandResult cmd_tradeoff(const ExperimentConfig& cfg) {
  CommandResult r;
  const auto seed = cfg.require_seed("tradeoff");
  const auto& t = cfg.tradeoff;
  const auto formulas = tradeoff_formulas(t);
  ThreeSatVerifier v(FormulaLayout::minimal(t.p, t.clauses));
  const OracleBudget budget{std::max<std::size_t>(24, t.p)};
  std::vector<CertConcept> targets;
  for (const auto& f : formulas) targets.emplace_back(v, v.encode(f), cfg.code, budget);
  const std::vector<std::string> learners{"few_sample", "sparse_erm"};
  for (const auto& name : learners) {
    const auto choice = make_learner(name, v, cfg.code, t.eps, 0.01, budget);
    for (auto m : t.budgets) {
      TradeoffRow row;
      row.n = v.n();
      row.p = v.p();
      row.m = m;
      row.learner = name;
      std::size_t successes = 0;
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto d = distribution_suite(targets[k]).front().d;
        const auto s = pac_trial_suite(choice.learner, targets[k], d, t.eps, m, t.trials,
                                       Rng::derive(seed, k));
        row.trials += s.trials;
        successes += s.successes;
        row.mean_error += s.mean_error * static_cast<double>(s.trials);
        row.mean_steps += s.mean_steps * static_cast<double>(s.trials);
      }
      row.elapsed_seconds = seconds_since(start);
      row.success_rate = static_cast<double>(successes) / static_cast<double>(row.trials);
      row.mean_error /= static_cast<double>(row.trials);
      row.mean_steps /= static_cast<double>(row.trials);
      r.rows.push_back(row);
    }
  }
  const auto top = *std::ranges::max_element(t.budgets);
  const auto at_top = [&](const std::string& name) {
    return std::ranges::find_if(r.rows, [&](const TradeoffRow& row) {
      return row.learner == name && row.m == top;
    })->mean_steps;
  };
  const double few = at_top("few_sample");
  const double erm = at_top("sparse_erm");
  const double factor = erm > 0 ? few / erm : 0.0;
  r.report.push_back("p " + std::to_string(t.p) + " n " + std::to_string(v.n()) + " formulas " +
                     std::to_string(formulas.size()));
  for (const auto& target : targets) {
    r.report.push_back("w* rank " + std::to_string(lex_rank(*target.certificate())) +
                       " sparsity " + std::to_string(target.sparsity()));
  }
  r.report.push_back("largest budget " + std::to_string(top) + ": few_sample steps " +
                     format_number(few) + ", sparse_erm steps " + format_number(erm) +
                     ", factor " + format_number(factor));
  if (factor < t.min_factor) {
    r.failures.push_back("step factor " + format_number(factor) + " below " +
                         format_number(t.min_factor));
  }
  write_file(cfg.out, "tradeoff.csv", tradeoff_csv(r.rows));
  write_file(cfg.out, "tradeoff_timing.csv", timing_csv(r.rows));
  finish(cfg, "tradeoff", r);
  return r;
}

CommandResult cmd_vcdim(const ExperimentConfig& cfg) {
  CommandResult r;
  const auto corpus = load_corpus(cfg.corpus);
  ThreeSatVerifier v(layout_for(corpus));
  const auto concepts = concepts_of(v, corpus, cfg.code);
  std::vector<BitString> points;
  const auto matrix = support_matrix(concepts, &points);
  const auto vc = vc_dimension(matrix, cfg.vcdim.max_size);
  const auto distinct = distinct_concepts(matrix);
  const auto log_bound = static_cast<std::size_t>(std::bit_width(distinct) - 1);

  const auto probe = choose_probe(concepts, cfg.vcdim.probe_points);
  std::size_t ldim = 0;
  if (!probe.empty()) {
    const auto masks = probe_masks(std::span<const CertConcept>(concepts), probe);
    ldim = ldim_oracle(masks, probe.size(), cfg.vcdim.ldim_depth).value;
  }
  r.report.push_back("concepts " + std::to_string(concepts.size()) + " distinct " +
                     std::to_string(distinct));
  r.report.push_back("support_points " + std::to_string(points.size()));
  r.report.push_back("vc " + std::to_string(vc.dimension) + " sets_checked " +
                     std::to_string(vc.sets_checked));
  if (!vc.witness.empty()) {
    r.report.push_back("vc_witness " + points[vc.witness.front()].to_string());
  }
  r.report.push_back("log2_concepts_floor " + std::to_string(log_bound));
  r.report.push_back("ldim " + std::to_string(ldim) + " probe_points " +
                     std::to_string(probe.size()) + " depth " +
                     std::to_string(cfg.vcdim.ldim_depth));
  if (vc.dimension > log_bound) r.failures.push_back("VC dimension exceeds log2 |C|");
  if (ldim < vc.dimension && !probe.empty()) {
    r.failures.push_back("Littlestone dimension below VC dimension");
  }
  if (cfg.vcdim.expect_vc && vc.dimension != *cfg.vcdim.expect_vc) {
    r.failures.push_back("expected VC " + std::to_string(*cfg.vcdim.expect_vc));
  }
  if (cfg.vcdim.expect_ldim && ldim != *cfg.vcdim.expect_ldim) {
    r.failures.push_back("expected Ldim " + std::to_string(*cfg.vcdim.expect_ldim));
  }
  write_file(cfg.out, "vcdim.txt", lines_of(r.report));
  finish(cfg, "vcdim", r);
  return r;
}

CommandResult cmd_codes_test(const ExperimentConfig& cfg) {
  CommandResult r;
  const auto seed = cfg.require_seed("codes-test");
  for (auto m : cfg.codes.lengths) {
    const auto rep = radius_check(cfg.code, m, cfg.codes.max_patterns, cfg.codes.random_patterns,
                                  cfg.codes.max_messages, Rng::derive(seed, m));
    // Past the radius decoding only has to return a message.
    Rng rng(Rng::derive(seed, 1000 + m));
    std::size_t far_ok = 0;
    for (int t = 0; t < 1000; ++t) {
      const auto x = rng.bits(m);
      auto y = encode(cfg.code, x).bits;
      for (std::size_t q = 0; q <= rep.radius; ++q) y.flip(rng.below(y.size()));
      far_ok += decode(cfg.code, rng.bits(y.size())).size() == m && decode(cfg.code, y).size() == m;
    }
    r.report.push_back("m " + std::to_string(m) + " codeword " + std::to_string(rep.codeword_len) +
                       " radius " + std::to_string(rep.radius) + " patterns_per_message " +
                       std::to_string(rep.patterns_per_message) +
                       (rep.exhaustive ? " exhaustive" : " sampled") + " messages " +
                       std::to_string(rep.messages) + " trials " + std::to_string(rep.trials) +
                       " failures " + std::to_string(rep.failures) + " far_inputs_ok " +
                       std::to_string(far_ok));
    if (rep.failures) {
      r.failures.push_back("m = " + std::to_string(m) + ": " + std::to_string(rep.failures) +
                           " decoding failures inside the radius");
    }
    if (far_ok != 1000) r.failures.push_back("far inputs did not decode to messages");
  }
  write_file(cfg.out, "codes.txt", lines_of(r.report));
  finish(cfg, "codes-test", r);
  return r;
}

}  // namespace certlearn
