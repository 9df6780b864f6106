#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace occ {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or out-of-range configuration (policy parameters, fold counts, grids).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied inputs violate a precondition (empty lists, mismatched sets).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based data row and the column name.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string column, const std::string& what)
      : Error("row " + std::to_string(row) + ", column '" + column + "': " + what),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

/// Unknown preference label string.
class LabelError : public Error {
 public:
  explicit LabelError(std::string value)
      : Error("unknown preference label '" + value + "'"), value_(std::move(value)) {}

  const std::string& value() const noexcept { return value_; }

 private:
  std::string value_;
};

/// Not enough distinct occupants in a candidate pool.
class PoolError : public Error {
 public:
  using Error::Error;
};

/// Feature vector does not match a model's feature layout (includes unknown occupants).
class ShapeError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// A committee was requested before any labels exist.
class ColdStartError : public Error {
 public:
  using Error::Error;
};

/// Dataset cannot support the requested analysis (e.g. a single class).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

/// Structural problem in a file that parsed field-by-field (e.g. non-monotonic time).
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace occ
