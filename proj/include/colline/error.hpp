#pragma once

#include <stdexcept>
#include <string>

namespace colline {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A geometric construction was asked for on degenerate input (a = b, dependent directions, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// Evaluating a map failed (division by zero inside a DSL map, input outside a table's domain).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The map violates a hypothesis needed by a construction; the message names the failing fact.
class ViolationError : public Error {
 public:
  using Error::Error;
};

/// Self-validation failed. This is a bug, never a verdict.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace colline
