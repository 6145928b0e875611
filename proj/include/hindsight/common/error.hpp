#pragma once

#include <stdexcept>
#include <string>

namespace hindsight {

/// Thrown when a caller breaks a documented precondition (shape mismatch,
/// out-of-range index, invalid coefficient).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares system has fewer distinct abscissae than unknowns.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A target, gradient or parameter became NaN/inf during training.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace hindsight
