#pragma once

#include <stdexcept>
#include <string>

namespace aftrack {

/// Invalid inputs or configuration. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown: factorization failure, non-convergence, or a
/// violated post-condition. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aftrack
