#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

// Arguments outside the mathematical domain of an operation (Hurst index
// outside (0,1), negative field coordinates, malformed grids, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A truncated series did not reach the requested tolerance before the
// term cap.
class ToleranceNotReached : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Special-function evaluation produced a non-finite value.
class SpecialFunctionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EigenFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sampling was requested for a covariance without a positive
// semidefiniteness certificate that covers it.
class NotCertified : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OffGridCorner : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// The analytic covariance gap at the witness points is too small to be
// resolved by the configured number of Monte Carlo paths.
class DegenerateWitness : public std::runtime_error {
 public:
  DegenerateWitness(const std::string& what, double required_paths)
      : std::runtime_error(what), required_paths_(required_paths) {}
  double required_paths() const noexcept { return required_paths_; }

 private:
  double required_paths_;
};

}  // namespace aniso
