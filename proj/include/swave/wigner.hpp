#pragma once

#include <string>

#include "swave/common.hpp"
#include "swave/packets.hpp"

// Wigner function W(x,p) = pi^{-N} int d^N y psi*(x+y) psi(x-y) e^{2i p.y}
// of the isotropic power-law packets, and the phase-space volumes of its
// negative and positive parts.  An isotropic real packet makes W a function
// of (|x|, |p|, cos angle(x,p)) only, which is the coordinate set used here.

namespace swave {

/// Symmetry-reduced phase-space coordinates.
struct PhasePoint {
    double r = 0.0;          // |x| >= 0
    double p = 0.0;          // |p| >= 0
    double cos_theta = 0.0;  // cosine of the angle between x and p, in [-1,1]
};

/// Summary of the negative/positive phase-space volumes.
struct PhaseSpaceReport {
    int dimension = 0;
    double v_minus = 0.0;  // integral of max(-W, 0) over all phase space
    double v_plus = 0.0;   // integral of max(+W, 0)
    double normalization_residual = 0.0;  // v_plus - v_minus - 1
    std::string grid_meta;                // quadrature resolution description
    double error_estimate = 0.0;          // from resolution refinement
};

/// Quadrature resolution for negative_volume.  The outer integral uses
/// Gauss-Legendre panels in r and p plus a single Gauss-Legendre rule on the
/// reduced angular range; the inner Wigner transform uses Gauss-Hermite in
/// the longitudinal y component (tensored with itself for N=2, with
/// Gauss-Legendre panels in the transverse radius for N=3).
struct WignerResolution {
    int radial_panels = 20;   // 8-point GL panels on [0, cutoff], r and p each
    int angular_nodes = 16;   // GL nodes on the reduced angular range
    int hermite_nodes = 128;  // Gauss-Hermite nodes (resolves 2 p delta_r <= 21)
    int rho_panels = 24;      // transverse 8-point GL panels (N = 3 only)
    double tolerance = 0.02;  // max allowed difference between refinements
};

/// negative_volume's refinement check failed: halving the outer resolution
/// moved v_minus by more than the requested tolerance.
struct ResolutionInsufficient : NumericalError {
    using NumericalError::NumericalError;
};

/// W at a symmetry-reduced point, by numerical quadrature of the defining
/// y-integral over the Gaussian-weighted domain |y| <= 8 delta_r.  Absolute
/// accuracy 1e-6 (natural units delta_r = 1; the quadrature order adapts to
/// the oscillation scale 2 p delta_r).  PowerGaussian packets with
/// N in {2, 3} only; throws std::invalid_argument otherwise and
/// std::domain_error for coordinates outside their ranges.
double wigner_value(const WavePacketSpec& spec, const PhasePoint& point);

/// V-minus and V-plus with the symmetry-reduced measure
///   N=2: (2 pi) r dr . p dp . d theta,  theta in [0, 2 pi)
///   N=3: (4 pi r^2 dr) . (2 pi p^2 dp) . sin theta d theta
/// over r in [0, 10 delta_r], p in [0, 10 / delta_r].  The error estimate
/// comes from re-running at half the outer resolution; if the two runs
/// disagree by more than resolution.tolerance, throws ResolutionInsufficient.
PhaseSpaceReport negative_volume(const WavePacketSpec& spec,
                                 const WignerResolution& resolution = {});

}  // namespace swave
