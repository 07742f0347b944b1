#pragma once

#include <stdexcept>
#include <string>

namespace perfwall {

// Bad or inconsistent user input. The CLI maps these to exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A measurement that cannot come from a physically consistent run
// (S > k, E > 1, E < 1/k, R_Max > R_Peak).
class InconsistentMeasurement : public InputError {
 public:
  using InputError::InputError;
};

// Quantity not defined for the given input, e.g. alpha_eff for k = 1.
class UndefinedQuantity : public InputError {
 public:
  using InputError::InputError;
};

// Gain requested for (1 - alpha) = 0.
class UnboundedGain : public InputError {
 public:
  using InputError::InputError;
};

// The modeled machine spends the whole run on sequential overhead.
class OverheadSaturation : public InputError {
 public:
  using InputError::InputError;
};

// Malformed config / CSV text.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// Internal invariant broken. Exit status 2.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace perfwall
