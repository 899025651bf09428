#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace freeknot {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point or index outside the valid domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration: bad tolerance, degree mismatch, conflicting options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unusable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Too few samples for the requested operation.
class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// Input whose value range collapses to a point.
class DegenerateDataError : public DataError {
 public:
  using DataError::DataError;
};

/// CSV cell that failed to parse, located by 1-based file row and column.
class ParseError : public DataError {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : DataError("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " +
                  what),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Model document that cannot be decoded (version, kind, or structure).
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

/// Numerical failure of a least-squares fit.
class FitError : public Error {
 public:
  explicit FitError(const std::string& what, std::optional<std::size_t> basis_index = {})
      : Error(what), basis_index_(basis_index) {}

  /// 0-based index of the basis function that made the system singular, when known.
  std::optional<std::size_t> basis_index() const noexcept { return basis_index_; }

 private:
  std::optional<std::size_t> basis_index_;
};

/// Gradient-descent training produced a non-finite loss.
class TrainingDivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace freeknot
