#pragma once

#include <stdexcept>
#include <string>

namespace fhlab {

// Invalid inputs: out-of-domain arguments, malformed configs, unmet preconditions.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A MomentQuery (or similar) lies outside the regime where the asymptotic
// formulas are proved: singularity too close to the edge, too close to
// another singularity, degenerate Laplacian, or a test function that is too
// narrow.
class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// gamma >= 2*sqrt(2): outside the L^1 phase.
class PhaseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base class for failures of a numerical procedure on valid input.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoRootError : public NumericError {
 public:
  using NumericError::NumericError;
};

class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class RejectionEfficiencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonTerminationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotPositiveDefinite : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateEstimate : public NumericError {
 public:
  using NumericError::NumericError;
};

class CoincidentPoints : public NumericError {
 public:
  using NumericError::NumericError;
};

class OverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace fhlab
