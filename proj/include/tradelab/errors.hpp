#pragma once

#include <stdexcept>
#include <string>

namespace tradelab {

// Each category maps onto one CLI exit status (see cli.hpp).

/// Caller broke an API contract: bad configuration value, wrong shapes,
/// stepping a finished episode.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data is unusable: parse failures, price invariants, ordering,
/// not enough bars for the requested split/history, unreadable files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed CSV row. Carries the 1-based line number in the source.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A bar that violates the OHLC price invariants.
class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

/// Dates not strictly increasing.
class OrderingError : public DataError {
 public:
  using DataError::DataError;
};

/// Filesystem problems (missing input, unwritable output directory).
class IoError : public DataError {
 public:
  using DataError::DataError;
};

/// Non-finite loss, TD error or solver breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tradelab
