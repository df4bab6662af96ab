#pragma once

#include <stdexcept>
#include <string>

namespace muskat {

/// Base for failures of a numerical method (as opposed to invalid input).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepSizeUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateLift : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LinearSolveFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace muskat
