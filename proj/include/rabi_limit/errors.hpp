#pragma once

#include <stdexcept>

namespace rabi {

// Truncated Fock space too small for the requested construction/evolution.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical guard tripped (arccos clipping band, cross-check mismatch, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An adaptive series hit its term cap before reaching the requested tolerance.
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rabi
