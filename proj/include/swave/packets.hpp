#pragma once

#include "swave/radial.hpp"

// Initial s-wave packet families, their normalization, radial densities and
// reduced radial wavefunctions u(r,0) = r^{(N-1)/2} sqrt(S_N) Psi(r).

namespace swave {

enum class PacketFamily {
    PowerGaussian,              // Psi ~ r^gamma exp(-r^2/(2 delta_r^2))
    SineGaussian,               // Psi ~ sin(r^2/delta_r^2) exp(-r^2/(2 delta_r^2))
    DisplacedGaussianReduced,   // u   ~ exp(-(r-rho)^2/delta_r^2), same for all N
};

struct WavePacketSpec {
    PacketFamily family = PacketFamily::PowerGaussian;
    double gamma = 2.0;    // exponent (PowerGaussian only)
    double delta_r = 1.0;  // Gaussian length scale
    double rho = 0.0;      // displacement (DisplacedGaussianReduced only)
    int dimension = 2;     // N
};

/// Throws std::domain_error when the spec violates its invariants
/// (delta_r <= 0, N < 1, PowerGaussian gamma < 0, rho < 0).
void validate(const WavePacketSpec& spec);

/// Total solid angle S_N = 2 pi^{N/2} / Gamma(N/2).
double solid_angle(int n_dim);

/// Radial normalization constant of the PowerGaussian density
/// W(r) = N^2 r^{N+2 gamma-1} exp(-(r/delta_r)^2):
/// N = sqrt(2/Gamma(N/2+gamma)) * delta_r^{-N/2-gamma}.
double normalization_constant(const WavePacketSpec& spec);

/// Radial probability density W(r), normalized so int_0^inf W dr = 1.
double radial_density(const WavePacketSpec& spec, double r);

/// Grid sized for the packet's support: r_max = max(20 delta_r, rho + 12
/// delta_r), 4096 interior points.
RadialGrid default_grid(const WavePacketSpec& spec);

/// u(r,0) sampled on the grid and renormalized so sum |u|^2 spacing = 1
/// exactly (the raw samples are off by the quadrature error of the grid).
/// Real valued; sign follows the wavefunction (SineGaussian oscillates).
/// Throws GridTooSmall when the probability beyond r_max exceeds 1e-8.
RadialState reduced_wavefunction(const WavePacketSpec& spec,
                                 const RadialGrid& grid);

/// <r> at t=0 by quadrature of r W(r).  For PowerGaussian gamma=2 this
/// equals Gamma((N+5)/2)/Gamma((N+4)/2) * delta_r.
double initial_mean_radius(const WavePacketSpec& spec);

}  // namespace swave
