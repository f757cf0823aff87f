#pragma once

#include <stdexcept>
#include <string>

namespace biord {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed text input (words, rationals, maps, realization files).
struct ParseError : Error {
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

struct InvalidTau : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct NotInKernel : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct MergeFailed : Error {
  using Error::Error;
};

struct NotFound : Error {
  using Error::Error;
};

struct NoMovement : Error {
  using Error::Error;
};

/// The Magnus expansion stayed undecided up to the degree ceiling.
struct MagnusCapExceeded : Error {
  using Error::Error;
};

}  // namespace biord
