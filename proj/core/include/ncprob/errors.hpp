#pragma once

#include <stdexcept>
#include <string>

namespace ncprob {

/// Base class for every recoverable error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A requested basis would exceed the configured entry budget.
struct CapacityExceeded : Error {
  using Error::Error;
};

/// A mode index falls outside the basis window.
struct ModeOutOfWindow : Error {
  using Error::Error;
};

/// A deformed Gram block is numerically singular (min eigenvalue <= 1e-10).
struct GramDegenerate : Error {
  using Error::Error;
};

/// The window is too small for the requested shifts / supports / margins.
struct WindowTooSmall : Error {
  using Error::Error;
};

/// Exact permutation enumeration was requested for |I| > 8.
struct FactorialBlowup : Error {
  using Error::Error;
};

/// Haagerup parameter outside (0, +inf].
struct LambdaOutOfRange : Error {
  using Error::Error;
};

/// Segment-state parameter outside [0, 1].
struct GammaOutOfRange : Error {
  using Error::Error;
};

/// Word supports overlap where a check's hypothesis requires disjointness.
struct SupportsOverlap : Error {
  using Error::Error;
};

/// A moment-table label is not part of the declared sample alphabet.
struct UnknownLabel : Error {
  using Error::Error;
};

/// Half-word concatenation produced a key the table cannot evaluate.
struct KeyConcatenationInvalid : Error {
  using Error::Error;
};

/// Malformed textual input (words, normal forms, CSV rows, configs).
struct ParseError : Error {
  using Error::Error;
};

/// Any other argument violating a documented precondition.
struct InvalidParameter : Error {
  using Error::Error;
};

}  // namespace ncprob
