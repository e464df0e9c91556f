#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "certlearn/three_sat.hpp"

namespace certlearn {

/// Every clause over variables 1..num_vars with 1 to 3 distinct literals,
/// complementary pairs allowed. Ordered by literal list.
std::vector<Clause> all_clauses(std::uint32_t num_vars);

/// Every formula made of at most `max_clauses` distinct clauses from
/// all_clauses(num_vars), clause order increasing; starts with the empty
/// formula. Two variables and three clauses give 470 formulas.
std::vector<ThreeSatInstance> exhaustive_corpus(std::uint32_t num_vars, std::uint32_t max_clauses);

struct RandomCorpusSpec {
  std::size_t count = 200;
  std::uint32_t min_vars = 3;
  std::uint32_t max_vars = 4;
  std::uint32_t clauses = 6;
  std::uint32_t min_width = 1;
  std::uint32_t max_width = 3;
  std::uint64_t seed = 1;
};

/// Fixed clause count; each clause draws a width in [min_width, max_width], then
/// distinct variables and polarities uniformly.
std::vector<ThreeSatInstance> random_corpus(const RandomCorpusSpec& spec);

std::vector<ThreeSatInstance> dimacs_corpus(std::span<const std::filesystem::path> paths);

/// Smallest layout holding every formula in the corpus.
FormulaLayout layout_for(std::span<const ThreeSatInstance> corpus);

}  // namespace certlearn
