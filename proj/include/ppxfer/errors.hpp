#pragma once

#include <stdexcept>
#include <string>

namespace ppxfer {

// Bad user-supplied configuration (sizes, ranges, unknown enum values).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computed quantity violated a physical bound beyond tolerance,
// e.g. a probability above 1 + 1e-9.
class NumericalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested problem exceeds a hard size cap (Ryser order, Fock dimension).
class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace ppxfer
