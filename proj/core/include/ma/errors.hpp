#pragma once

#include <stdexcept>
#include <string>

namespace ma {

/// Invalid user-supplied configuration (grid size, scheme options, names).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical data that violates a precondition, e.g. a non-finite sample.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear system could not be solved to the requested tolerance.
class LinearSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ma
