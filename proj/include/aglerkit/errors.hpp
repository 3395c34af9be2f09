#pragma once

#include <stdexcept>
#include <string>

namespace aglerkit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: mismatched sizes, degrees too small, out-of-domain points.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Evaluation near a pole or outside the open polydisk.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// The Gram feasibility solve ran out of iterations above tolerance.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double best_residual, long iterations)
      : Error(what), best_residual_(best_residual), iterations_(iterations) {}
  double best_residual() const noexcept { return best_residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  long iterations_;
};

// A rigidity statement that must hold for genuine Schur maps or retractions
// was contradicted numerically.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class NotSolvableError : public Error {
 public:
  using Error::Error;
};

// The map handed to the retract pipeline is not idempotent.
class NotRetractionError : public Error {
 public:
  using Error::Error;
};

class DegenerateContinuation : public Error {
 public:
  using Error::Error;
};

}  // namespace aglerkit
