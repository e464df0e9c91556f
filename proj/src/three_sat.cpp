#include "certlearn/three_sat.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "certlearn/errors.hpp"

namespace certlearn {

void ThreeSatInstance::canonicalize() {
  for (auto& clause : clauses) std::sort(clause.begin(), clause.end());
}

void ThreeSatInstance::validate() const {
  for (const auto& clause : clauses) {
    if (clause.size() > FormulaLayout::kLiteralSlots) {
      throw ShapeError("clause has more than three literals");
    }
    for (const auto& lit : clause) {
      if (lit.var < 1 || lit.var > num_vars) {
        throw ShapeError("literal references a variable outside [1, num_vars]");
      }
    }
  }
}

bool ThreeSatInstance::satisfied_by(const BitString& assignment) const {
  for (const auto& clause : clauses) {
    bool sat = false;
    for (const auto& lit : clause) {
      const bool value = lit.var <= assignment.size() && assignment[lit.var - 1];
      if (value == lit.positive) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::string to_string(const ThreeSatInstance& f) {
  std::ostringstream out;
  out << "vars=" << f.num_vars << ' ';
  if (f.clauses.empty()) out << "(true)";
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    if (c > 0) out << '&';
    out << '(';
    for (std::size_t i = 0; i < f.clauses[c].size(); ++i) {
      if (i > 0) out << '|';
      out << (f.clauses[c][i].positive ? "" : "~") << 'x' << f.clauses[c][i].var;
    }
    out << ')';
  }
  return out.str();
}

FormulaLayout FormulaLayout::minimal(std::uint32_t max_vars, std::uint32_t max_clauses) {
  FormulaLayout layout;
  layout.max_vars = max_vars;
  layout.max_clauses = max_clauses;
  layout.num_vars_width = static_cast<std::size_t>(std::bit_width(max_vars));
  layout.clause_count_width = static_cast<std::size_t>(std::bit_width(max_clauses));
  layout.var_index_width =
      max_vars <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(max_vars - 1));
  return layout;
}

void FormulaLayout::validate() const {
  if (max_vars == 0) throw ConfigError("formula layout needs at least one variable");
  if (num_vars_width > 32 || std::bit_width(max_vars) > num_vars_width) {
    throw ConfigError("num_vars_width cannot hold max_vars");
  }
  if (clause_count_width > 32 || std::bit_width(max_clauses) > clause_count_width) {
    throw ConfigError("clause_count_width cannot hold max_clauses");
  }
  if (max_vars > 1 && std::bit_width(max_vars - 1) > var_index_width) {
    throw ConfigError("var_index_width cannot hold max_vars - 1");
  }
  if (var_index_width > 32) throw ConfigError("var_index_width too large");
}

BitString encode_3sat(const ThreeSatInstance& formula, const FormulaLayout& layout) {
  layout.validate();
  ThreeSatInstance f = formula;
  f.canonicalize();
  try {
    f.validate();
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  }
  if (f.num_vars > layout.max_vars) throw ConfigError("formula has too many variables");
  if (f.clauses.size() > layout.max_clauses) throw ConfigError("formula has too many clauses");

  BitString z;
  z.append_uint(f.num_vars, layout.num_vars_width);
  z.append_uint(f.clauses.size(), layout.clause_count_width);
  for (std::uint32_t c = 0; c < layout.max_clauses; ++c) {
    for (std::size_t s = 0; s < FormulaLayout::kLiteralSlots; ++s) {
      if (c < f.clauses.size() && s < f.clauses[c].size()) {
        const Literal& lit = f.clauses[c][s];
        z.push_back(true);
        z.push_back(lit.positive);
        z.append_uint(lit.var - 1, layout.var_index_width);
      } else {
        z.append_uint(0, layout.slot_width());
      }
    }
  }
  return z;
}

ThreeSatInstance decode_3sat(const BitString& z, const FormulaLayout& layout) {
  if (z.size() != layout.width()) throw ParseError("formula encoding has the wrong width");
  ThreeSatInstance f;
  std::size_t pos = 0;
  f.num_vars = static_cast<std::uint32_t>(z.read_uint(pos, layout.num_vars_width));
  pos += layout.num_vars_width;
  const auto count = z.read_uint(pos, layout.clause_count_width);
  pos += layout.clause_count_width;
  if (f.num_vars > layout.max_vars) throw ParseError("num_vars exceeds layout capacity");
  if (count > layout.max_clauses) throw ParseError("clause count exceeds layout capacity");

  for (std::uint32_t c = 0; c < layout.max_clauses; ++c) {
    Clause clause;
    bool absent_seen = false;
    for (std::size_t s = 0; s < FormulaLayout::kLiteralSlots; ++s) {
      const bool present = z[pos];
      const bool positive = z[pos + 1];
      const auto index = z.read_uint(pos + 2, layout.var_index_width);
      pos += layout.slot_width();
      if (!present) {
        if (positive || index != 0) throw ParseError("absent literal slot is not zero");
        absent_seen = true;
        continue;
      }
      if (c >= count) throw ParseError("literal in an unused clause slot");
      if (absent_seen) throw ParseError("present literal after an absent slot");
      const Literal lit{static_cast<std::uint32_t>(index + 1), positive};
      if (lit.var > f.num_vars) throw ParseError("literal variable exceeds num_vars");
      if (!clause.empty() && lit < clause.back()) {
        throw ParseError("clause literals are not in canonical order");
      }
      clause.push_back(lit);
    }
    if (c < count) f.clauses.push_back(std::move(clause));
  }
  return f;
}

ThreeSatInstance parse_dimacs(std::istream& in) {
  ThreeSatInstance f;
  bool header = false;
  std::size_t declared_clauses = 0;
  Clause current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;  // SATLIB end marker
    if (first == "p") {
      if (header) throw ParseError("duplicate DIMACS header");
      std::string format;
      long long vars = -1;
      long long clauses = -1;
      if (!(tokens >> format >> vars >> clauses) || format != "cnf" || vars < 0 ||
          clauses < 0) {
        throw ParseError("malformed DIMACS header on line " + std::to_string(line_no));
      }
      f.num_vars = static_cast<std::uint32_t>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      header = true;
      continue;
    }
    if (!header) throw ParseError("clause before DIMACS header");
    std::istringstream body(line);
    std::string token;
    while (body >> token) {
      long long lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stoll(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParseError("non-integer token '" + token + "' on line " +
                         std::to_string(line_no));
      }
      if (lit == 0) {
        if (current.size() > FormulaLayout::kLiteralSlots) {
          throw ParseError("clause with more than three literals on line " +
                           std::to_string(line_no));
        }
        f.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const long long var = lit < 0 ? -lit : lit;
      if (var > static_cast<long long>(f.num_vars)) {
        throw ParseError("literal exceeds declared variable count on line " +
                         std::to_string(line_no));
      }
      current.push_back(Literal{static_cast<std::uint32_t>(var), lit > 0});
    }
  }
  if (!header) throw ParseError("missing DIMACS header");
  if (!current.empty()) throw ParseError("last clause is not terminated by 0");
  if (f.clauses.size() != declared_clauses) {
    throw ParseError("clause count does not match the DIMACS header");
  }
  f.canonicalize();
  return f;
}

ThreeSatInstance parse_dimacs_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open DIMACS file " + path.string());
  return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const ThreeSatInstance& f) {
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& clause : f.clauses) {
    for (const auto& lit : clause) {
      out << (lit.positive ? "" : "-") << lit.var << ' ';
    }
    out << "0\n";
  }
}

bool brute_force_satisfiable(const ThreeSatInstance& f) {
  if (f.num_vars > 30) throw BudgetExceeded("brute-force SAT limited to 30 variables");
  const std::uint64_t total = std::uint64_t{1} << f.num_vars;
  for (std::uint64_t a = 0; a < total; ++a) {
    if (f.satisfied_by(BitString::from_uint(a, f.num_vars))) return true;
  }
  return false;
}

}  // namespace certlearn
