#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <cstdint>
#include <optional>
#include <vector>

#include "swave/analytic.hpp"
#include "swave/common.hpp"
#include "swave/radial.hpp"

// Direct time evolution of the reduced radial Schroedinger equation
//   i du/dt = [-(1/2) d^2/dr^2 + V_N(r)] u,   V_N(r) = (N-1)(N-3)/(8 r^2),
// by a unitary Crank-Nicolson scheme, plus an independent spectral
// propagator that is exact on the Dirichlet box (sine modes for N=3,
// Fourier-Bessel J0 modes for N=2, where the box eigenfunctions absorb the
// attractive -1/(8r^2) potential), and observable extraction.

namespace swave {

enum class Provenance { Analytic, CrankNicolson, Spectral };

struct MomentSeries {
    std::vector<MomentRecord> records;  // sorted by tau, strictly increasing
    Provenance provenance = Provenance::Analytic;
};

/// Numerical failure during an evolution run; carries the records sampled
/// before the failure so callers can flush a partial series.
struct EvolveError : NumericalError {
    MomentSeries partial;
    EvolveError(const std::string& msg, MomentSeries partial_series)
        : NumericalError(msg), partial(std::move(partial_series)) {}
};

/// |u| at the outermost 5% of the grid exceeded 1e-6 of max|u|.
struct BoundaryContamination : EvolveError {
    using EvolveError::EvolveError;
};

/// Grid norm drifted away from 1 by more than 1e-7.
struct NormDrift : EvolveError {
    using EvolveError::EvolveError;
};

/// V_N(r) = (N-1)(N-3)/(8 r^2); zero for N in {1, 3}, attractive for N=2.
double effective_potential(int n_dim, double r);

/// First moments of a state, in natural units: norm = sum |u|^2 dr,
/// <r> = sum r |u|^2 dr, <p> = Im sum u* (du/dr) dr with centered
/// differences and Dirichlet ends.  tau = time/delta_r^2.
MomentRecord observables(const RadialState& state);

/// Accuracy-guarded default step: min(2.5e-4, 4 spacing^2).
double default_time_step(const RadialGrid& grid);

/// Crank-Nicolson trajectory sampled every sample_every steps (the initial
/// state is always record 0).  Requires dt <= 4 spacing^2; n_steps = 0 gives
/// the initial record only.  Throws BoundaryContamination / NormDrift (with
/// the partial series attached) if the run leaves its box or loses
/// unitarity.  The final state is written to *final_state when given.
MomentSeries crank_nicolson_evolve(const RadialState& initial, double dt,
                                   std::int64_t n_steps, int sample_every,
                                   RadialState* final_state = nullptr);

// Exact free propagator on the Dirichlet box.  Building one factorizes the
// N=2 collocation matrix once (O(n^3)); propagate() is then O(n^2) for N=2
// and O(n log n) for N=3.
class SpectralPropagator {
  public:
    SpectralPropagator(const RadialGrid& grid, int dimension);

    /// State advanced by dimensionless time tau (t = tau delta_r^2).
    RadialState propagate(const RadialState& initial, double tau) const;

    /// <p>(t -> infinity) = <k> over the mode spectrum of the state; the
    /// momentum distribution is a free-particle invariant.
    double asymptotic_momentum(const RadialState& initial) const;

  private:
    Eigen::VectorXcd coefficients(const RadialState& state) const;
    Eigen::VectorXcd resum(const Eigen::VectorXcd& coeff) const;

    RadialGrid grid_;
    int dimension_;
    Eigen::VectorXd k_;          // mode wavenumbers
    Eigen::MatrixXd basis_;      // N=2: J0(kappa_m r_j / r_max)
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;  // N=2 forward transform
    Eigen::VectorXd mode_weight_;  // Parseval weight per mode
};

/// One-shot convenience wrapper around SpectralPropagator.
RadialState spectral_free_propagate(const RadialState& initial, double tau);

/// Moment series from the spectral propagator on a uniform tau grid
/// 0 = tau_0 < ... < tau_{samples-1} = tau_max (one factorization total).
MomentSeries spectral_moment_series(const RadialState& initial,
                                    double tau_max, int samples);

/// Closed-form gamma=2 moment series on the same uniform tau grid, in
/// scaled units (mean_r/r0, mean_p/p_inf).
MomentSeries analytic_moment_series(int n_dim, double tau_max, int samples);

/// Location and depth of the first interior minimum of mean_r(tau) relative
/// to mean_r(0), by quadratic fit through the three bracketing samples.
/// Absent when mean_r is non-decreasing; InsufficientSampling when fewer
/// than 16 records or the minimum sits within 2 samples of either end.
std::optional<GammaMinimum> find_implosion(const MomentSeries& series);

}  // namespace swave
