#pragma once

#include <stdexcept>
#include <string>

namespace certlearn {

/// Input has the wrong length or an index falls outside its container.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive enumeration would exceed its configured bit budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text or binary input (DIMACS, tree text, formula encodings).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unsupported parameters or an invalid experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A labeled sample that no concept of the class can have produced.
class DataInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An online adversary whose labels are not realizable by the class.
class AdversaryInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace certlearn
