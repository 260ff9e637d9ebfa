#pragma once

#include <stdexcept>
#include <string>

namespace qfa {

// Invalid distribution parameters or arguments outside a documented domain.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Iteration, quadrature or bracketing failed to reach the requested accuracy.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Result exceeds the double range (e.g. K_v(z) for tiny z and large |v|).
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Degenerate linear system (Pade / Chebyshev-Pade table entry).
struct SingularSystemError : ConvergenceError {
  using ConvergenceError::ConvergenceError;
};

}  // namespace qfa
