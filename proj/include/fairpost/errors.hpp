#pragma once

#include <stdexcept>
#include <string>

namespace fairpost {

// Error hierarchy, grouped by the exit code the CLI maps them to:
//   ValidationError (and subclasses) -> 2, ConvergenceError -> 3, IoError -> 4.
// Library code throws; it never calls exit() or prints.

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates the expected table layout (missing column, wrong field count).
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A cell failed to parse as a finite number; carries the 1-based file line.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, long line)
      : ValidationError(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

// Vector/matrix shape mismatch.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Unknown group label.
class LookupError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Requested operation is outside the supported regime (e.g. exact matching
// beyond the brute-force size limit).
class UnsupportedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An iterative solver ran out of iterations; carries the last residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fairpost
