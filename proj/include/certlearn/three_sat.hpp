#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "certlearn/bitstring.hpp"

namespace certlearn {

struct Literal {
  std::uint32_t var = 1;  // 1-indexed
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
  /// Canonical order: by variable, negated literal before positive.
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// CNF formula whose clauses carry at most three literals.
///
/// Assignments are bit strings of the verifier's certificate length; bit
/// j - 1 holds variable j, so "01" reads x1 = 0, x2 = 1.
struct ThreeSatInstance {
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  /// Sorts literals inside each clause; clause order is kept.
  void canonicalize();
  /// Throws ShapeError if a literal references a variable outside
  /// [1, num_vars] or a clause has more than three literals.
  void validate() const;
  /// Evaluates under `assignment`; bits past the assignment length read 0.
  bool satisfied_by(const BitString& assignment) const;

  friend bool operator==(const ThreeSatInstance&, const ThreeSatInstance&) = default;
};

std::string to_string(const ThreeSatInstance& f);

/// Widths of the fixed-size binary formula encoding.
///
/// Layout, MSB first:
///
///   | field        | width               | contents                        |
///   |--------------|---------------------|---------------------------------|
///   | num_vars     | num_vars_width      | declared variable count         |
///   | clause_count | clause_count_width  | number of used clause slots     |
///   | clause slot  | 3 * slot_width()    | repeated max_clauses times      |
///
/// Each literal slot is (present bit, polarity bit with 1 = positive,
/// var_index_width bits holding var - 1). Present literals come first inside
/// a clause in canonical order; absent slots and unused clause slots are all
/// zero. The all-zero string is therefore the empty formula over 0 variables.
struct FormulaLayout {
  std::uint32_t max_vars = 0;
  std::uint32_t max_clauses = 0;
  std::size_t num_vars_width = 0;
  std::size_t clause_count_width = 0;
  std::size_t var_index_width = 0;

  static constexpr std::size_t kLiteralSlots = 3;

  /// Smallest widths able to hold `max_vars` variables and `max_clauses`.
  static FormulaLayout minimal(std::uint32_t max_vars, std::uint32_t max_clauses);

  std::size_t slot_width() const { return 2 + var_index_width; }
  std::size_t clause_width() const { return kLiteralSlots * slot_width(); }
  std::size_t width() const {
    return num_vars_width + clause_count_width + max_clauses * clause_width();
  }
  /// Throws ConfigError when the widths cannot represent max_vars/max_clauses.
  void validate() const;

  friend bool operator==(const FormulaLayout&, const FormulaLayout&) = default;
};

/// Encodes `f` (canonicalized first). Throws ConfigError if `f` does not fit.
BitString encode_3sat(const ThreeSatInstance& f, const FormulaLayout& layout);
/// Strict inverse of encode_3sat; throws ParseError on any non-canonical or
/// out-of-range field.
ThreeSatInstance decode_3sat(const BitString& z, const FormulaLayout& layout);

/// Reads `p cnf <vars> <clauses>` DIMACS; clauses longer than three literals
/// are rejected.
ThreeSatInstance parse_dimacs(std::istream& in);
ThreeSatInstance parse_dimacs_file(const std::filesystem::path& path);
void write_dimacs(std::ostream& out, const ThreeSatInstance& f);

/// Brute-force satisfiability over all 2^num_vars assignments.
bool brute_force_satisfiable(const ThreeSatInstance& f);

}  // namespace certlearn
