#pragma once

#include <stdexcept>
#include <string>

namespace conelab {

// Malformed polynomial files and report documents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid command-line or run configuration.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input form whose n or degree disagrees with the run configuration.
class DimensionMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (n, degree) pairs outside the supported desk-scale range.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine failed in a way that indicates a bug rather than
// bad input (e.g. a Gram matrix that is not positive definite).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conelab
