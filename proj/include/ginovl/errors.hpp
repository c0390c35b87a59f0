#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ginovl {

/// Argument outside the mathematical domain of an evaluator.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double best, double err_est)
      : std::runtime_error(what), best_estimate(best), error_estimate(err_est) {}
  double best_estimate;
  double error_estimate;
};

/// Spectrum too close to degenerate for a trustworthy eigenvector basis.
class DegenerateSampleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// No accepted sample fell inside the requested eigenvalue window.
class EmptyWindowError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Not enough data for a statistic (KS needs >= 100 samples, tail fit >= 5 bins).
class InsufficientDataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ginovl
