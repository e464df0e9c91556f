#include "certlearn/corpus.hpp"

#include <algorithm>

#include "certlearn/errors.hpp"
#include "certlearn/rng.hpp"

namespace certlearn {

std::vector<Clause> all_clauses(std::uint32_t num_vars) {
  std::vector<Literal> literals;
  for (std::uint32_t v = 1; v <= num_vars; ++v) {
    literals.push_back({v, false});
    literals.push_back({v, true});
  }
  std::vector<Clause> out;
  auto grow = [&](auto&& self, std::size_t start, Clause& current) -> void {
    if (!current.empty()) out.push_back(current);
    if (current.size() == FormulaLayout::kLiteralSlots) return;
    for (std::size_t i = start; i < literals.size(); ++i) {
      current.push_back(literals[i]);
      self(self, i + 1, current);
      current.pop_back();
    }
  };
  Clause current;
  grow(grow, 0, current);
  std::ranges::sort(out);
  return out;
}

std::vector<ThreeSatInstance> exhaustive_corpus(std::uint32_t num_vars,
                                                std::uint32_t max_clauses) {
  const auto clauses = all_clauses(num_vars);
  std::vector<ThreeSatInstance> out;
  ThreeSatInstance current{num_vars, {}};
  auto grow = [&](auto&& self, std::size_t start) -> void {
    out.push_back(current);
    if (current.clauses.size() == max_clauses) return;
    for (std::size_t i = start; i < clauses.size(); ++i) {
      current.clauses.push_back(clauses[i]);
      self(self, i + 1);
      current.clauses.pop_back();
    }
  };
  grow(grow, 0);
  return out;
}

std::vector<ThreeSatInstance> random_corpus(const RandomCorpusSpec& spec) {
  if (spec.min_vars < 1 || spec.min_vars > spec.max_vars) {
    throw ConfigError("random corpus needs 1 <= min_vars <= max_vars");
  }
  if (spec.min_width < 1 || spec.min_width > spec.max_width ||
      spec.max_width > FormulaLayout::kLiteralSlots || spec.max_width > spec.min_vars) {
    throw ConfigError("random corpus clause widths must satisfy 1 <= min_width <= max_width <= "
                      "min(3, min_vars)");
  }
  Rng rng(spec.seed);
  std::vector<ThreeSatInstance> out;
  out.reserve(spec.count);
  for (std::size_t f = 0; f < spec.count; ++f) {
    ThreeSatInstance formula;
    formula.num_vars = spec.min_vars +
                       static_cast<std::uint32_t>(rng.below(spec.max_vars - spec.min_vars + 1));
    for (std::uint32_t c = 0; c < spec.clauses; ++c) {
      const auto width = spec.min_width + rng.below(spec.max_width - spec.min_width + 1);
      std::vector<std::uint32_t> vars(formula.num_vars);
      for (std::uint32_t v = 0; v < formula.num_vars; ++v) vars[v] = v + 1;
      Clause clause;
      for (std::uint64_t k = 0; k < width; ++k) {
        const auto pick = k + rng.below(vars.size() - k);
        std::swap(vars[k], vars[pick]);
        clause.push_back({vars[k], rng.bernoulli(0.5)});
      }
      formula.clauses.push_back(clause);
    }
    formula.canonicalize();
    out.push_back(std::move(formula));
  }
  return out;
}

std::vector<ThreeSatInstance> dimacs_corpus(std::span<const std::filesystem::path> paths) {
  std::vector<ThreeSatInstance> out;
  for (const auto& path : paths) out.push_back(parse_dimacs_file(path));
  return out;
}

FormulaLayout layout_for(std::span<const ThreeSatInstance> corpus) {
  std::uint32_t vars = 1;
  std::uint32_t clauses = 1;
  for (const auto& f : corpus) {
    vars = std::max(vars, f.num_vars);
    clauses = std::max(clauses, static_cast<std::uint32_t>(f.clauses.size()));
  }
  return FormulaLayout::minimal(vars, clauses);
}

}  // namespace certlearn
