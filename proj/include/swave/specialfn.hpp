#pragma once

#include <cstdint>
#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

#include "swave/common.hpp"

// Self-contained special functions and quadrature used by the rest of the
// library.  Accuracy targets: gamma_fn better than 1e-12 relative on
// [0.5, 30]; hyp1f1 better than 1e-9 relative for the parameter range used by
// the radial moment integrals (a in [-2.5, 0), b = 1, z in the closed first
// quadrant with |z| up to a few hundred); bessel_j0 better than 1e-10
// absolute for 0 <= x <= ~1e4.

namespace swave {

template <typename T>
struct QuadratureResult {
    T value{};
    double error_estimate = 0.0;  // absolute
    std::int64_t evaluations = 0;
};

/// Euler gamma function for x > 0 (Lanczos approximation, g = 607/128).
double gamma_fn(double x);

/// Confluent hypergeometric 1F1(a; b; z) for real parameters and complex
/// argument.  Power series for moderate |z|, large-|z| expansion otherwise.
cplx hyp1f1(double a, double b, cplx z);

/// Bessel function of the first kind, order zero, x >= 0.
double bessel_j0(double x);

namespace detail {

QuadratureResult<double> integrate_semi_infinite_real(
    const std::function<double(double)>& f, double tol,
    const std::vector<double>& breakpoints, std::int64_t max_evaluations);

QuadratureResult<cplx> integrate_semi_infinite_cplx(
    const std::function<cplx(double)>& f, double tol,
    const std::vector<double>& breakpoints, std::int64_t max_evaluations);

}  // namespace detail

/// Adaptive integration of f over [0, inf) for real- or complex-valued f.
/// The integrand must decay (an oscillation under a decaying envelope is
/// fine).  `breakpoints` are abscissae the initial segmentation must not
/// straddle, e.g. points where the integrand definition switches.  Throws
/// ToleranceNotMet when the absolute tolerance cannot be reached within the
/// evaluation budget.
template <typename F>
auto integrate_semi_infinite(F&& f, double tol,
                             const std::vector<double>& breakpoints = {},
                             std::int64_t max_evaluations = 4'000'000) {
    using R = std::remove_cvref_t<std::invoke_result_t<F&, double>>;
    if constexpr (std::is_convertible_v<R, double>)
        return detail::integrate_semi_infinite_real(std::forward<F>(f), tol,
                                                    breakpoints,
                                                    max_evaluations);
    else
        return detail::integrate_semi_infinite_cplx(std::forward<F>(f), tol,
                                                    breakpoints,
                                                    max_evaluations);
}

namespace detail {

/// 1/Gamma(x) for any real x (entire function; zero at non-positive ints).
double reciprocal_gamma(double x);

/// Bessel J1, needed for Newton refinement of J0 zeros.
double bessel_j1(double x);

/// First n positive zeros of J0 (McMahon expansion + Newton).
std::vector<double> bessel_j0_zeros(int n);

/// Coefficients beta_k of the exponentially growing branch of the large-|z|
/// expansion 1F1(a;b;z) ~ P(z) + e^z z^(a-b)/Gamma(a) * sum_k beta_k z^-k.
/// beta_k = (b-a)_k (1-a)_k / k!.  Used by callers that integrate |1F1|^2
/// tails in closed form.
std::vector<double> hyp1f1_exp_branch_coeffs(double a, double b, int k_max);

/// Adaptive Gauss-Kronrod over a fixed set of segments (used internally and
/// by finite-range callers).
QuadratureResult<double> integrate_segments(
    const std::function<double(double)>& f,
    std::vector<std::pair<double, double>> segments, double tol,
    std::int64_t max_evaluations = 4'000'000);

}  // namespace detail
}  // namespace swave
