#include "swave/packets.hpp"

#include <cmath>
#include <complex>

#include "swave/specialfn.hpp"

namespace swave {

void validate(const WavePacketSpec& spec) {
    if (!(spec.delta_r > 0.0) || !std::isfinite(spec.delta_r))
        throw std::domain_error("WavePacketSpec: delta_r must be > 0");
    if (spec.dimension < 1)
        throw std::domain_error("WavePacketSpec: dimension must be >= 1");
    if (spec.family == PacketFamily::PowerGaussian &&
        (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma)))
        throw std::domain_error("WavePacketSpec: gamma must be >= 0");
    if (spec.family == PacketFamily::DisplacedGaussianReduced &&
        (!(spec.rho >= 0.0) || !std::isfinite(spec.rho)))
        throw std::domain_error("WavePacketSpec: rho must be >= 0");
}

double solid_angle(int n_dim) {
    if (n_dim < 1) throw std::domain_error("solid_angle: N must be >= 1");
    return 2.0 * std::pow(pi, 0.5 * n_dim) / gamma_fn(0.5 * n_dim);
}

double normalization_constant(const WavePacketSpec& spec) {
    validate(spec);
    if (spec.family != PacketFamily::PowerGaussian)
        throw std::domain_error(
            "normalization_constant: defined for the PowerGaussian family");
    const double half_order = 0.5 * spec.dimension + spec.gamma;
    return std::sqrt(2.0 / gamma_fn(half_order)) *
           std::pow(spec.delta_r, -half_order);
}

namespace {

// int_0^inf r^{N-1} sin^2(r^2/d^2) e^{-(r/d)^2} dr in closed form:
// substituting s = (r/d)^2 and sin^2 = (1 - cos 2s)/2 gives
// d^N Gamma(N/2) [1 - Re (1-2i)^{-N/2}] / 4.
double sine_gaussian_norm(int n_dim, double delta_r) {
    const double mu = 0.5 * n_dim;
    const std::complex<double> br =
        std::pow(std::complex<double>(1.0, -2.0), -mu);
    return std::pow(delta_r, n_dim) * gamma_fn(mu) * (1.0 - br.real()) / 4.0;
}

// int_0^inf e^{-2(r-rho)^2/d^2} dr (Gaussian with sigma = d/2 cut at 0).
double displaced_norm(double rho, double delta_r) {
    const double s = 0.5 * delta_r;
    return s * std::sqrt(2.0 * pi) * 0.5 *
           (1.0 + std::erf(rho * std::sqrt(2.0) / delta_r));
}

// Real reduced amplitude before grid renormalization; |amp|^2 integrates to
// one over [0, inf) for the first two families, and the displaced family is
// renormalized on the grid anyway (its samples must not depend on N).
double reduced_amplitude(const WavePacketSpec& spec, double r) {
    const double d = spec.delta_r;
    switch (spec.family) {
        case PacketFamily::PowerGaussian:
            return normalization_constant(spec) *
                   std::pow(r, 0.5 * (spec.dimension + 2.0 * spec.gamma - 1.0)) *
                   std::exp(-0.5 * r * r / (d * d));
        case PacketFamily::SineGaussian:
            return std::pow(r, 0.5 * (spec.dimension - 1.0)) *
                   std::sin(r * r / (d * d)) *
                   std::exp(-0.5 * r * r / (d * d)) /
                   std::sqrt(sine_gaussian_norm(spec.dimension, d));
        case PacketFamily::DisplacedGaussianReduced: {
            const double x = (r - spec.rho) / d;
            return std::exp(-x * x);
        }
    }
    throw std::domain_error("WavePacketSpec: unknown family");
}

}  // namespace

double radial_density(const WavePacketSpec& spec, double r) {
    validate(spec);
    if (!(r >= 0.0)) throw std::domain_error("radial_density: r must be >= 0");
    const double d = spec.delta_r;
    switch (spec.family) {
        case PacketFamily::PowerGaussian: {
            const double nc = normalization_constant(spec);
            return nc * nc *
                   std::pow(r, spec.dimension + 2.0 * spec.gamma - 1.0) *
                   std::exp(-r * r / (d * d));
        }
        case PacketFamily::SineGaussian: {
            const double s = std::sin(r * r / (d * d));
            return std::pow(r, spec.dimension - 1.0) * s * s *
                   std::exp(-r * r / (d * d)) /
                   sine_gaussian_norm(spec.dimension, d);
        }
        case PacketFamily::DisplacedGaussianReduced: {
            const double x = (r - spec.rho) / d;
            return std::exp(-2.0 * x * x) / displaced_norm(spec.rho, d);
        }
    }
    throw std::domain_error("WavePacketSpec: unknown family");
}

RadialGrid default_grid(const WavePacketSpec& spec) {
    validate(spec);
    return RadialGrid(
        std::max(20.0 * spec.delta_r, spec.rho + 12.0 * spec.delta_r), 4096);
}

RadialState reduced_wavefunction(const WavePacketSpec& spec,
                                 const RadialGrid& grid) {
    validate(spec);
    // Probability genuinely beyond the grid (as opposed to the grid-sum
    // quadrature error, which the renormalization below absorbs).
    const double d = spec.delta_r;
    const double r1 = grid.r_max;
    const auto density = [&spec](double r) { return radial_density(spec, r); };
    const double tail =
        detail::integrate_segments(
            density,
            {{r1, r1 + 2.0 * d}, {r1 + 2.0 * d, r1 + 6.0 * d},
             {r1 + 6.0 * d, r1 + 12.0 * d + spec.rho}},
            1e-10)
            .value;
    if (tail > 1e-8)
        throw GridTooSmall(
            "reduced_wavefunction: grid truncates the packet (tail "
            "probability above 1e-8)");

    RadialState state{grid, Eigen::VectorXcd(grid.n_points), 0.0,
                      spec.dimension, spec.delta_r};
    double norm = 0.0;
    for (int j = 0; j < grid.n_points; ++j) {
        const double a = reduced_amplitude(spec, grid.r(j));
        state.u[j] = a;
        norm += a * a;
    }
    norm *= grid.spacing;
    if (!(norm > 0.0))
        throw NumericalError("reduced_wavefunction: vanishing grid norm");
    state.u /= std::sqrt(norm);
    return state;
}

double initial_mean_radius(const WavePacketSpec& spec) {
    validate(spec);
    const double scale = spec.rho + 3.0 * spec.delta_r;
    auto res = integrate_semi_infinite(
        [&spec](double r) { return r * radial_density(spec, r); },
        1e-11 * scale, {spec.delta_r, scale});
    return res.value;
}

}  // namespace swave
