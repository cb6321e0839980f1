#pragma once

#include <stdexcept>
#include <string>

namespace tfetd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole (gamma at non-positive integers, r(z) at z = 3, 4).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// A linear solve hit a singular factor.
class SolveError : public Error {
 public:
  using Error::Error;
};

class NewtonDivergence : public Error {
 public:
  NewtonDivergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// A truncated series did not reach its tolerance within the term budget.
class SeriesError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tfetd
