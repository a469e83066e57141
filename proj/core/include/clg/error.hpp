#pragma once

#include <stdexcept>
#include <string>

namespace clg {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, evidence, networks).
class DataError : public Error {
 public:
  using Error::Error;
};

// Inference is mathematically undefined for the given parameters, e.g.
// continuous evidence on a variable with a zero-variance density.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// An operation was invoked in the wrong propagation phase.
class PhaseError : public Error {
 public:
  using Error::Error;
};

// A table allocation exceeded the configured memory budget.
class OutOfMemoryError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant. Indicates a bug, never bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace clg
