#pragma once

#include <stdexcept>
#include <string>

namespace biorder {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sign queries reject the identity element: it is neither positive nor negative.
struct IdentityInput : Error {
  using Error::Error;
};

// The truncated expansion stayed constant up to the degree cap. The caller
// gets told instead of being handed a guessed sign.
struct TruncationExceeded : Error {
  using Error::Error;
};

// Asserting a sign that directly clashes with the stored opposite sign.
struct ImmediateClash : Error {
  using Error::Error;
};

// A word fell outside the cone's length bound.
struct LengthExceeded : Error {
  using Error::Error;
};

// A finite-stage realization had no control point to interpolate.
struct EmptySupport : Error {
  using Error::Error;
};

// Positivity check invoked on a non-positive element.
struct NotPositive : Error {
  using Error::Error;
};

struct PreconditionFailed : Error {
  using Error::Error;
};

}  // namespace biorder
