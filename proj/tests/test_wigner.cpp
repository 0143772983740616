#include <doctest.h>

#include <cmath>
#include <random>

#include "swave/wigner.hpp"

// The gamma = 2 Wigner function reduces in closed form: differentiating the
// Gaussian generating integral (contour shift y -> u + i p) gives
//   W = pi^-N e^{-r^2-p^2} B / ((N/2)(N/2 + 1)),
//   B = r^4 + (N-2) r^2 - 2 r^2 p^2 + p^4 - (N+2) p^2 + N(N+2)/4
//       + 4 r^2 p^2 mu^2,
// in natural units delta_r = 1.  This expression (and the frozen literals
// below, produced by 30-digit direct quadrature of the defining y-integral)
// is the oracle the quadrature implementation is checked against.

namespace {

double closed_gamma2(int n_dim, double r, double p, double mu) {
    const double r2 = r * r, p2 = p * p;
    const double bracket = r2 * r2 + (n_dim - 2) * r2 - 2 * r2 * p2 + p2 * p2 -
                           (n_dim + 2) * p2 + 0.25 * n_dim * (n_dim + 2) +
                           4 * r2 * p2 * mu * mu;
    const double half = 0.5 * n_dim;
    return std::pow(swave::pi, -n_dim) * std::exp(-r2 - p2) * bracket /
           (half * (half + 1.0));
}

double closed_gamma0(int n_dim, double r, double p) {
    return std::pow(swave::pi, -n_dim) * std::exp(-r * r - p * p);
}

swave::WavePacketSpec power(int dim, double gamma, double delta_r = 1.0) {
    swave::WavePacketSpec spec;
    spec.family = swave::PacketFamily::PowerGaussian;
    spec.gamma = gamma;
    spec.delta_r = delta_r;
    spec.dimension = dim;
    return spec;
}

}  // namespace

TEST_CASE("wigner_value matches 30-digit quadrature literals") {
    struct Point {
        int dim;
        double r, p, mu, value;
    };
    // direct mpfr-grade quadrature of pi^-N int d^N y psi psi e^{2ip.y}
    const Point pts[] = {
        {2, 1.2, 0.9, 0.4, -0.00051582547160910039},
        {2, 0.5, 1.6, 0.0, -0.0088569546611674088},
        {2, 2.1, 1.3, 0.8, 0.002467687883300451},
        {3, 1.0, 1.1, 0.3, -0.00077392882226282496},
        {3, 1.5, 1.5, 0.9, 0.0010655312163205902},
    };
    for (const auto& q : pts) {
        const double got = swave::wigner_value(power(q.dim, 2.0),
                                               {q.r, q.p, q.mu});
        CHECK(std::abs(got - q.value) <= 1e-12);
        // same points through the closed-form reduction
        CHECK(std::abs(closed_gamma2(q.dim, q.r, q.p, q.mu) - q.value) <=
              1e-15);
    }
    // gamma = 0 against the Gaussian phase-space product
    CHECK(std::abs(swave::wigner_value(power(2, 0.0), {0.8, 1.2, 0.5}) -
                   0.012658076972648796) <= 1e-13);
    CHECK(std::abs(swave::wigner_value(power(3, 0.0), {0.8, 1.2, 0.5}) -
                   0.0040291910404694999) <= 1e-13);
}

TEST_CASE("wigner_value agrees with the closed form on a grid") {
    for (int dim : {2, 3}) {
        const auto spec = power(dim, 2.0);
        for (double r : {0.0, 0.6, 1.3, 2.2, 3.1})
            for (double p : {0.0, 0.5, 1.1, 1.9, 3.4})
                for (double mu : {0.0, 0.35, 0.8, 1.0}) {
                    const double got = swave::wigner_value(spec, {r, p, mu});
                    CHECK(std::abs(got - closed_gamma2(dim, r, p, mu)) <=
                          1e-9);
                }
    }
}

TEST_CASE("gamma=0 Wigner function is the positive Gaussian") {
    for (int dim : {2, 3}) {
        const auto spec = power(dim, 0.0);
        for (double r : {0.0, 0.7, 1.6, 2.8})
            for (double p : {0.0, 0.9, 2.1}) {
                const double got = swave::wigner_value(spec, {r, p, 0.3});
                CHECK(got >= -1e-12);
                CHECK(std::abs(got - closed_gamma0(dim, r, p)) <= 1e-10);
            }
    }
}

TEST_CASE("wigner_value symmetry and scale covariance") {
    const auto spec = power(2, 2.0);
    for (double mu : {0.2, 0.7, 1.0}) {
        const double plus = swave::wigner_value(spec, {1.1, 1.4, mu});
        const double minus = swave::wigner_value(spec, {1.1, 1.4, -mu});
        CHECK(std::abs(plus - minus) <= 1e-15);  // real psi: W(x,p)=W(x,-p)
    }
    // W_delta(r, p, mu) = W_1(r/delta, p delta, mu): dimensionless values
    for (double d : {0.5, 2.0}) {
        const auto scaled = power(3, 2.0, d);
        const double got = swave::wigner_value(scaled, {1.0 * d, 1.1 / d, 0.3});
        CHECK(std::abs(got - closed_gamma2(3, 1.0, 1.1, 0.3)) <= 1e-9);
    }
    // deep in the Gaussian tail the value is indistinguishable from zero
    CHECK(swave::wigner_value(spec, {1.0, 25.0, 0.5}) == 0.0);
}

TEST_CASE("gamma=2 packets have negative Wigner regions") {
    // the shell packets go negative between the position and momentum rings
    CHECK(swave::wigner_value(power(2, 2.0), {0.5, 1.6, 0.0}) < -1e-3);
    CHECK(swave::wigner_value(power(3, 2.0), {1.0, 1.1, 0.3}) < -1e-4);
}

TEST_CASE("wigner_value input validation") {
    swave::WavePacketSpec sine = power(2, 2.0);
    sine.family = swave::PacketFamily::SineGaussian;
    CHECK_THROWS_AS(swave::wigner_value(sine, {1.0, 1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(swave::wigner_value(power(4, 2.0), {1.0, 1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(swave::wigner_value(power(1, 2.0), {1.0, 1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(swave::wigner_value(power(2, 2.0), {-0.1, 1.0, 0.0}),
                    std::domain_error);
    CHECK_THROWS_AS(swave::wigner_value(power(2, 2.0), {1.0, -1.0, 0.0}),
                    std::domain_error);
    CHECK_THROWS_AS(swave::wigner_value(power(2, 2.0), {1.0, 1.0, 1.5}),
                    std::domain_error);
}

TEST_CASE("negative volumes of the gamma=2 shells") {
    const auto rep2 = swave::negative_volume(power(2, 2.0));
    const auto rep3 = swave::negative_volume(power(3, 2.0));

    // published 2-digit values
    CHECK(std::abs(rep2.v_minus - 0.27) <= 0.02);
    CHECK(std::abs(rep3.v_minus - 0.23) <= 0.02);
    // high-resolution reference from the closed form (analytic angular
    // integral + 3840^2-point radial grid): 0.2706610780 / 0.2236046796
    CHECK(std::abs(rep2.v_minus - 0.2706610780) <= 5e-4);
    CHECK(std::abs(rep3.v_minus - 0.2236046796) <= 5e-4);
    // two dimensions carry slightly more negativity
    CHECK(rep2.v_minus > rep3.v_minus);

    for (const auto& rep : {rep2, rep3}) {
        CHECK(rep.v_minus >= 0.0);
        CHECK(rep.v_plus >= 0.0);
        CHECK(std::abs(rep.normalization_residual) <= rep.error_estimate);
        CHECK(std::abs(rep.v_plus - rep.v_minus - 1.0) <= 1e-6);
        CHECK(rep.grid_meta.size() > 0);
    }
    CHECK(rep2.dimension == 2);
    CHECK(rep3.dimension == 3);
}

TEST_CASE("gamma=0 negative volume vanishes") {
    for (int dim : {2, 3}) {
        const auto rep = swave::negative_volume(power(dim, 0.0));
        CHECK(rep.v_minus <= 1e-4);
        CHECK(std::abs(rep.v_plus - 1.0) <= 1e-4);
    }
}

TEST_CASE("negative volume is independent of delta_r") {
    const double base = swave::negative_volume(power(2, 2.0, 1.0)).v_minus;
    for (double d : {0.5, 2.0}) {
        const double got = swave::negative_volume(power(2, 2.0, d)).v_minus;
        CHECK(std::abs(got - base) <= 1e-8);
    }
}

TEST_CASE("negative volume refinement stability") {
    // doubling the outer resolution moves v_minus by less than the estimate
    swave::WignerResolution coarse;
    coarse.radial_panels = 10;
    coarse.angular_nodes = 8;
    const auto rep = swave::negative_volume(power(2, 2.0), coarse);
    swave::WignerResolution fine;
    fine.radial_panels = 20;
    fine.angular_nodes = 16;
    const auto rep2 = swave::negative_volume(power(2, 2.0), fine);
    CHECK(std::abs(rep2.v_minus - rep.v_minus) < rep.error_estimate);
}

TEST_CASE("non-integer gamma volumes keep the invariants") {
    const auto rep = swave::negative_volume(power(2, 3.0));
    CHECK(rep.v_minus > 0.01);  // non-Gaussian pure state (Hudson)
    CHECK(std::abs(rep.normalization_residual) <= rep.error_estimate);
}

TEST_CASE("insufficient resolution is reported") {
    swave::WignerResolution res;
    res.radial_panels = 4;
    res.angular_nodes = 4;
    res.tolerance = 1e-9;
    CHECK_THROWS_AS(swave::negative_volume(power(2, 2.0), res),
                    swave::ResolutionInsufficient);
    swave::WignerResolution bad;
    bad.hermite_nodes = 64;
    CHECK_THROWS_AS(swave::negative_volume(power(2, 2.0), bad),
                    std::invalid_argument);
    bad = {};
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(swave::negative_volume(power(2, 2.0), bad),
                    std::invalid_argument);
}

TEST_CASE("Monte Carlo estimate agrees with the quadrature") {
    // independent estimator: uniform sampling of the reduced coordinates
    // against the closed-form gamma=2 Wigner function
    const double quad = swave::negative_volume(power(2, 2.0)).v_minus;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const long n = 5000000;
    double acc = 0.0, acc2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double r = 6.0 * unif(rng), p = 6.0 * unif(rng);
        const double theta = 2.0 * swave::pi * unif(rng);
        const double w = closed_gamma2(2, r, p, std::cos(theta));
        const double jac = 36.0 * 2.0 * swave::pi;  // box volume
        const double s = jac * 2.0 * swave::pi * r * p * std::max(-w, 0.0);
        acc += s;
        acc2 += s * s;
    }
    const double mean = acc / n;
    const double sigma = std::sqrt((acc2 / n - mean * mean) / n);
    CHECK(std::abs(mean - quad) <= 4.0 * sigma);
}
