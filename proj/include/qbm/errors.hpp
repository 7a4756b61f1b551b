#ifndef QBM_ERRORS_HPP
#define QBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbm {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument or parameter-record invariant violation.
struct DomainError : Error {
  using Error::Error;
};

/// Parameters outside the regime the closed forms are valid in
/// (overdamped oscillator, zero friction asymptote, missing Drude root).
struct UnsupportedRegimeError : Error {
  using Error::Error;
};

/// Observable/bath combination with no finite correlators
/// (momentum correlators for a strictly Ohmic bath).
struct UnsupportedObservableError : Error {
  using Error::Error;
};

/// Internal consistency violation, e.g. a non-positive covariance
/// determinant where a valid Gaussian is required.
struct ConsistencyError : Error {
  using Error::Error;
};

/// Run-configuration validation failure.
struct ConfigError : Error {
  using Error::Error;
};

/// A density grid does not cover enough standard deviations.
struct CoverageError : Error {
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
struct QuadratureError : Error {
  using Error::Error;
};

/// Finite-difference step below the roundoff floor.
struct StepSizeError : Error {
  using Error::Error;
};

}  // namespace qbm

#endif  // QBM_ERRORS_HPP
