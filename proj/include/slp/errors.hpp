#pragma once

#include <stdexcept>
#include <string>

namespace slp {

// Base class so callers can catch everything from this library at once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values (unknown type, rank out of range, non-square-free d, ...).
struct ParameterError : Error {
  using Error::Error;
};

// Text that does not match the scalar grammar or a malformed JSON document.
struct ParseError : Error {
  using Error::Error;
};

// Arithmetic between scalars of distinct irrational fields.
struct FieldMismatchError : Error {
  using Error::Error;
};

struct DivisionByZeroError : Error {
  using Error::Error;
};

// Operation asked of a type/backend that deliberately does not support it.
struct UnsupportedError : Error {
  using Error::Error;
};

// An internal structural invariant failed; indicates a bug or corrupt input data.
struct InvariantViolation : Error {
  using Error::Error;
};

// A stated precondition of an operation does not hold for the given input.
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace slp
