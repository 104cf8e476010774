#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ruo {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A tolerance or other numeric parameter is out of its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// The underlying eigen/SVD solver did not converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Two independent constructions of the same object disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Malformed input document (JSON syntax or structure).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed fine but violates domain invariants. Carries every violation,
// not just the first one encountered.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace ruo
