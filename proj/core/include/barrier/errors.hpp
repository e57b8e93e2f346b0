#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace barrier {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: schema violations, out-of-range parameters, type invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Iteration budget exhausted. Carries the worst residual seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

/// Newton iteration diverged or hit a flat derivative.
class NewtonError : public Error {
 public:
  NewtonError(const std::string& what, std::complex<double> last_iterate)
      : Error(what), last_iterate_(last_iterate) {}
  std::complex<double> last_iterate() const noexcept { return last_iterate_; }

 private:
  std::complex<double> last_iterate_;
};

/// A zero sits too close to an argument-principle contour.
class BoundaryProximityError : public Error {
 public:
  using Error::Error;
};

/// Division by a vanishing denominator, pole proximity, singular weights.
class SingularInputError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// An independent oracle disagreed with the primary computation.
class CertificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace barrier
