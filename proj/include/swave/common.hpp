#pragma once

#include <complex>
#include <stdexcept>
#include <string>

// Shared constants and error types.  Everything in this library works in
// natural units hbar = M = 1; lengths are measured in units of the packet
// width delta_r unless stated otherwise, and the dimensionless time is
// tau = t / delta_r^2.

namespace swave {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double sqrt_pi = 1.772453850905516027298167483341145183;

/// Base class for numerical failures (as opposed to precondition violations,
/// which throw std::invalid_argument / std::domain_error).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of budget before reaching the tolerance.
/// Carries the best estimate so callers can decide whether to keep it.
struct ToleranceNotMet : NumericalError {
    double best_value;
    double best_error;
    ToleranceNotMet(const std::string& msg, double value, double error)
        : NumericalError(msg), best_value(value), best_error(error) {}
};

/// A series or iteration failed to converge.
struct NonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

/// Requested grid cannot hold the state (truncated probability too large).
struct GridTooSmall : NumericalError {
    using NumericalError::NumericalError;
};

/// A sampled series is too sparse or too short to resolve the feature asked
/// for (e.g. a minimum sitting within two samples of either end).
struct InsufficientSampling : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace swave
