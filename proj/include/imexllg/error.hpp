#pragma once

#include <stdexcept>
#include <string>

namespace llg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different grids, or a grid is malformed.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Bad input data (non-finite values, out-of-range parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A tableau violates the shape required by the requested operation.
class InvalidTableau : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for this tableau (e.g. stage count).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Tableau search ran out of restarts.
class SearchFailure : public Error {
 public:
  using Error::Error;
};

/// An iterative stage solve did not reach its tolerance.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// A stage or step produced non-finite values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step, int stage)
      : Error(what), step_(step), stage_(stage) {}

  long step() const noexcept { return step_; }
  int stage() const noexcept { return stage_; }

 private:
  long step_;
  int stage_;
};

/// Fewer data points than a fit needs.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or tableau file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace llg
