#pragma once

#include <stdexcept>
#include <string>

namespace cmvlab {

/// Requested coefficient index lies outside the range a sequence defines.
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Bad argument or generator parameter (never silently clamped).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A structural identity that must hold exactly failed; signals a builder bug.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Iterative numerical routine did not converge.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear solve hit a pivot below the conditioning floor.
struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cmvlab
