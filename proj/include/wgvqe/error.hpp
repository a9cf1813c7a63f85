#pragma once

#include <stdexcept>
#include <string>

namespace wgvqe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad shape, out-of-range value, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its iteration cap before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A numerical quantity became non-finite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// The circuit already holds D_max gates; signals the end of an episode.
class CircuitFull : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wgvqe
