#pragma once

#include <optional>

#include "swave/common.hpp"

// Closed-form moment evolution of the gamma=2 packet in N dimensions and the
// quadrature-based general-gamma mean radius in two dimensions.  All times
// are the dimensionless tau = t/delta_r^2.

namespace swave {

enum class MomentUnits { Scaled, Natural };

// One sample of the first moments.  Scaled: mean_r in units of the initial
// mean radius r0, mean_p in units of the asymptotic momentum p_inf.
// Natural: mean_r in length units, mean_p in hbar/length units.
struct MomentRecord {
    double tau = 0.0;
    double mean_r = 0.0;
    double mean_p = 0.0;
    double norm = 1.0;  // grid norm at sampling time (1 exactly for analytic)
    MomentUnits units = MomentUnits::Scaled;
};

/// a_N = 1 + 4N/(N^2+3); the curvature constant of the mean-radius law.
double a_coeff(int n_dim);

/// <r>(tau)/r0 for the gamma=2 packet: (1 + tau^2/a_N)/sqrt(1+tau^2).
double mean_radius_gamma2(int n_dim, double tau);

/// <p>(tau)/p_inf for the gamma=2 packet: -tau(a_N-2-tau^2)/(1+tau^2)^{3/2}.
double mean_momentum_gamma2(int n_dim, double tau);

/// Initial mean radius of the gamma=2 packet:
/// r0_N = Gamma((N+5)/2)/Gamma((N+4)/2) * delta_r.
double initial_radius_gamma2(int n_dim, double delta_r);

/// Asymptotic radial momentum p_inf = r0_N/(a_N delta_r^2), hbar = M = 1.
double p_infinity(int n_dim, double delta_r);

/// True iff (N-1)(N-3) < 0, i.e. the mean radius initially contracts.
bool implosion_predicate(int n_dim);

/// sqrt(a_N - 2) when a_N > 2 (the zero of the mean momentum), else absent.
std::optional<double> tau_min(int n_dim);

/// mean_radius_gamma2 at tau_min when it exists, else absent.
std::optional<double> r_min_ratio(int n_dim);

/// tau^2 coefficient of the short-time expansion of mean_radius_gamma2:
/// 1/a_N - 1/2.
double short_time_coefficient(int n_dim);

/// <r>(tau) of the 2D power-law packet with exponent gamma > 1, in units of
/// that packet's own initial mean radius Gamma(gamma+3/2)/Gamma(gamma+1) *
/// delta_r (this convention makes the tau->0+ limit exactly 1; verified
/// against the gamma=2 closed form and the PDE solver).  Absolute quadrature
/// error <= tol.  The integrand's |1F1|^2 tail decays only as a power law;
/// it is integrated in closed form from the point where the large-argument
/// expansion holds, and the quadrature handles the exponentially decaying
/// remainder.
double mean_radius_general_gamma_2d(double gamma, double tau, double tol);

struct GammaMinimum {
    double tau_min = 0.0;      // location of the mean-radius minimum
    double r_min_ratio = 0.0;  // depth, in initial-mean-radius units
};

/// Golden-section minimum of mean_radius_general_gamma_2d over
/// tau in [1e-3, 3], bracket tolerance tau_tol.
GammaMinimum general_gamma_minimum(double gamma, double tau_tol = 1e-6);

}  // namespace swave
