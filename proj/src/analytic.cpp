#include "swave/analytic.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "swave/specialfn.hpp"

namespace swave {

namespace {

void check_dim(int n_dim) {
    if (n_dim < 1) throw std::domain_error("N must be >= 1");
}

}  // namespace

double a_coeff(int n_dim) {
    check_dim(n_dim);
    return 1.0 + 4.0 * n_dim / (static_cast<double>(n_dim) * n_dim + 3.0);
}

double mean_radius_gamma2(int n_dim, double tau) {
    const double a = a_coeff(n_dim);
    return (1.0 + tau * tau / a) / std::sqrt(1.0 + tau * tau);
}

double mean_momentum_gamma2(int n_dim, double tau) {
    const double a = a_coeff(n_dim);
    return -tau * (a - 2.0 - tau * tau) / std::pow(1.0 + tau * tau, 1.5);
}

double initial_radius_gamma2(int n_dim, double delta_r) {
    check_dim(n_dim);
    return gamma_fn(0.5 * (n_dim + 5)) / gamma_fn(0.5 * (n_dim + 4)) * delta_r;
}

double p_infinity(int n_dim, double delta_r) {
    if (!(delta_r > 0.0)) throw std::domain_error("delta_r must be > 0");
    return initial_radius_gamma2(n_dim, delta_r) /
           (a_coeff(n_dim) * delta_r * delta_r);
}

bool implosion_predicate(int n_dim) {
    check_dim(n_dim);
    return (n_dim - 1) * (n_dim - 3) < 0;
}

std::optional<double> tau_min(int n_dim) {
    const double a = a_coeff(n_dim);
    if (a <= 2.0) return std::nullopt;
    return std::sqrt(a - 2.0);
}

std::optional<double> r_min_ratio(int n_dim) {
    const auto tm = tau_min(n_dim);
    if (!tm) return std::nullopt;
    return mean_radius_gamma2(n_dim, *tm);
}

double short_time_coefficient(int n_dim) {
    return 1.0 / a_coeff(n_dim) - 0.5;
}

// ---------------------------------------------------------------------------
// General-gamma mean radius in 2D.
//
// The propagated wavefunction follows from the 2D s-wave propagator (a
// Hankel transform of order zero): for phi(r,0) ~ r^gamma e^{-r^2/2} the
// Gaussian-Bessel integral gives phi(r,tau) ~ 1F1(gamma/2+1; 1; z) with
// z = -r^2 (tau+i)/(2 tau (1+tau^2)), and the Kummer transformation
// 1F1(A;1;z) = e^z 1F1(1-A;1;-z) moves the oscillatory exponential into a
// real envelope.  The first radial moment, in units of the packet's own
// initial mean radius r0(gamma) = Gamma(gamma+3/2)/Gamma(gamma+1), becomes
//
// <r>(tau)/r0(gamma) = pref(gamma,tau) * I(tau;gamma) with
//   pref = 2^{gamma+1} Gamma^2(gamma/2+1)/Gamma(gamma+3/2)
//          * tau^gamma/(1+tau^2)^{(gamma+2)/2}
//   I    = int_0^inf dxi xi^2 e^{-xi^2/(1+tau^2)} |1F1(a;1;c xi^2)|^2,
//   a    = -gamma/2,   c = (tau+i)/(2 tau (1+tau^2)).
//
// At gamma = 2 this reduces analytically to the closed form
// (1 + tau^2/a2)/sqrt(1+tau^2) with a2 = 15/7, and the tau->0+ limit is
// exactly 1 for every gamma.
//
// After s = xi^2 the integrand is g(s) = (1/2) sqrt(s) e^{-s/(1+tau^2)}
// |1F1(a;1;cs)|^2.  Since Re c = 1/(2(1+tau^2)) exactly, the e^z branch of
// the large-|z| expansion cancels the Gaussian envelope exactly and leaves a
// pure power-law tail ~ s^{2a-3/2}.  That tail (with the expansion truncated
// at K terms) integrates in closed form from s0 = 45/|c|; subtracting it
// from g leaves an exponentially decaying remainder the adaptive quadrature
// handles.  The split is exact for any truncation order because the same
// truncated tail is both subtracted and re-added.

namespace {

struct TailModel {
    double s0 = 0.0;              // asymptotic regime threshold in s
    double front = 0.0;           // |c|^{2a-2} / Gamma(a)^2 / 2
    double exponent = 0.0;        // 2a - 1.5
    std::vector<double> w;        // coefficients of sum_m w_m s^{-m}

    double operator()(double s) const {
        double inv = 1.0 / s;
        double acc = 0.0;
        for (std::size_t m = w.size(); m-- > 0;) acc = acc * inv + w[m];
        return front * std::pow(s, exponent) * acc;
    }

    double integral_beyond_s0(double a) const {
        double acc = 0.0;
        for (std::size_t m = 0; m < w.size(); ++m)
            acc += w[m] * std::pow(s0, 2.0 * a - 0.5 - m) /
                   (m + 0.5 - 2.0 * a);
        return front * acc;
    }
};

TailModel make_tail_model(double a, cplx c) {
    constexpr int kTerms = 12;
    TailModel tail;
    tail.s0 = 45.0 / std::abs(c);
    const double rg = detail::reciprocal_gamma(a);
    tail.front = 0.5 * std::pow(std::abs(c), 2.0 * a - 2.0) * rg * rg;
    tail.exponent = 2.0 * a - 1.5;
    const auto beta = detail::hyp1f1_exp_branch_coeffs(a, 1.0, kTerms);
    std::vector<cplx> d(beta.size());
    cplx cpow(1.0, 0.0);
    const cplx cinv = 1.0 / c;
    for (std::size_t k = 0; k < beta.size(); ++k) {
        d[k] = beta[k] * cpow;
        cpow *= cinv;
    }
    tail.w.assign(2 * kTerms + 1, 0.0);
    for (std::size_t k = 0; k < d.size(); ++k)
        for (std::size_t l = 0; l < d.size(); ++l)
            tail.w[k + l] += (d[k] * std::conj(d[l])).real();
    return tail;
}

}  // namespace

double mean_radius_general_gamma_2d(double gamma, double tau, double tol) {
    if (!(gamma > 1.0))
        throw std::domain_error(
            "mean_radius_general_gamma_2d: gamma must be > 1");
    if (!(tau > 0.0))
        throw std::domain_error("mean_radius_general_gamma_2d: tau must be > 0");
    if (!(tol > 0.0))
        throw std::domain_error("mean_radius_general_gamma_2d: tol must be > 0");

    const double a = -0.5 * gamma;
    const double one_p = 1.0 + tau * tau;
    const cplx c = cplx(tau, 1.0) / (2.0 * tau * one_p);
    const double pref = std::pow(2.0, gamma + 1.0) *
                        std::pow(gamma_fn(0.5 * gamma + 1.0), 2) /
                        gamma_fn(gamma + 1.5) * std::pow(tau, gamma) /
                        std::pow(one_p, 0.5 * gamma + 1.0);

    const TailModel tail = make_tail_model(a, c);
    const auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double env = std::exp(-s / one_p);
        const cplx f = hyp1f1(a, 1.0, c * s);
        double g = 0.5 * std::sqrt(s) * env * std::norm(f);
        if (s > tail.s0) g -= tail(s);
        return g;
    };

    const auto quad = integrate_semi_infinite(
        integrand, tol / pref, {std::min(one_p, tail.s0), tail.s0});
    return pref * (quad.value + tail.integral_beyond_s0(a));
}

GammaMinimum general_gamma_minimum(double gamma, double tau_tol) {
    constexpr double kQuadTol = 1e-9;
    const auto f = [&](double t) {
        return mean_radius_general_gamma_2d(gamma, t, kQuadTol);
    };
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 1e-3, hi = 3.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tau_tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    GammaMinimum out;
    out.tau_min = 0.5 * (lo + hi);
    out.r_min_ratio = f(out.tau_min);
    return out;
}

}  // namespace swave
