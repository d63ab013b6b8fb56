#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ramsi {

/// Bad argument values (non-positive tolerances, infeasible counts, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operands whose dimensions do not agree.
class DimensionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// An iterative numeric routine failed to converge.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

/// Malformed input file. Row and column are zero-based; column is npos when
/// the error concerns a whole row.
class ParseError : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ParseError(const std::string& what, std::size_t row, std::size_t column = npos)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// An internal counting identity did not hold. Usually means the zero
/// tolerance is pathological for the data.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ramsi
