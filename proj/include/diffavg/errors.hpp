#pragma once

#include <stdexcept>
#include <string>

namespace diffavg {

// Bad input: malformed files, mismatched specs, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The numerics gave up: solver or optimizer failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diffavg
