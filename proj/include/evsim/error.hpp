#pragma once

#include <stdexcept>
#include <string>

namespace evsim {

/// Bad input: malformed files, missing fields, violated preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The numerics went wrong: non-finite values, diverged tracking.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evsim
