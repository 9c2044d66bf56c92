#pragma once

#include <stdexcept>
#include <string>

namespace schatten {

/// Malformed or out-of-contract input (bad dimensions, non-finite entries, n < p, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a value that contradicts a structural guarantee,
/// e.g. a clearly negative eigenvalue of a Gram matrix.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index or magnitude outside the representable / tabulated range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// An exhaustive path was asked to do more work than its guard allows.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace schatten
