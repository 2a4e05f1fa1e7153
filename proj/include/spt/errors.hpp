#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spt {

/// Bad argument to a library call (degree out of range, empty rule, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lookup of an unknown catalog entry.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent problem / mesh / run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point outside the physical domain.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Expression text that does not match the grammar.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Runtime failure while evaluating an expression (division by zero, no
/// matching piecewise branch). Carries the offending subexpression.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& message, std::string subexpression)
      : std::runtime_error(message + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Zero (or denormal) pivot during LU factorisation.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& message, std::size_t column)
      : std::runtime_error(message), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Source iteration did not reach its tolerance.
class IterationError : public std::runtime_error {
 public:
  IterationError(const std::string& message, double last_update, int iterations)
      : std::runtime_error(message), last_update_(last_update), iterations_(iterations) {}

  double last_update() const noexcept { return last_update_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_update_;
  int iterations_;
};

/// Not enough data for an analysis step (e.g. order fitting).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spt
