#include "swave/evolve.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>

#include "swave/specialfn.hpp"

namespace swave {

double effective_potential(int n_dim, double r) {
    if (n_dim < 1) throw std::domain_error("effective_potential: N must be >= 1");
    if (!(r > 0.0)) throw std::domain_error("effective_potential: r must be > 0");
    return (n_dim - 1) * (n_dim - 3) / (8.0 * r * r);
}

MomentRecord observables(const RadialState& state) {
    const int n = static_cast<int>(state.u.size());
    const double h = state.grid.spacing;
    double norm = 0.0, mean_r = 0.0, cross = 0.0;
    for (int j = 0; j < n; ++j) {
        const double w = std::norm(state.u[j]);
        norm += w;
        mean_r += state.grid.r(j) * w;
        // centered derivative with Dirichlet ghosts u(0) = u(r_max) = 0
        const cplx up = (j + 1 < n) ? state.u[j + 1] : cplx(0.0);
        const cplx um = (j > 0) ? state.u[j - 1] : cplx(0.0);
        cross += (std::conj(state.u[j]) * (up - um)).imag();
    }
    // The plain Riemann sum misweights the first cell: u ~ r^{(N-1)/2} near
    // the origin, so |u(h)|^2 h underestimates int_0^{3h/2} |u|^2 dr by the
    // volume factor (3/2)^N/N, and the deficit moves in and out of the first
    // cell as the packet evolves.  Weighting |u_0|^2 by that factor gives a
    // higher-order quadrature of the integral (and, for the dimensions that
    // use the flux-form stencil, exactly the quantity Crank-Nicolson
    // conserves).  The mean_r / mean_p sums are untouched: their integrands
    // vanish at least one power of r faster, so the first-cell correction is
    // below every tolerance in use.
    if (state.dimension >= 2)
        norm += (std::pow(1.5, state.dimension) / state.dimension - 1.0) *
                std::norm(state.u[0]);
    MomentRecord rec;
    rec.tau = state.time / (state.delta_r * state.delta_r);
    rec.norm = norm * h;
    rec.mean_r = mean_r * h;
    rec.mean_p = 0.5 * cross;  // (1/2h) * h
    rec.units = MomentUnits::Natural;
    return rec;
}

double default_time_step(const RadialGrid& grid) {
    return std::min(2.5e-4, 4.0 * grid.spacing * grid.spacing);
}

namespace {

void check_state(const RadialState& s, const char* who) {
    if (s.dimension < 1)
        throw std::domain_error(std::string(who) + ": dimension must be >= 1");
    if (s.u.size() != s.grid.n_points)
        throw std::invalid_argument(std::string(who) +
                                    ": u length does not match the grid");
    if (!(s.delta_r > 0.0))
        throw std::domain_error(std::string(who) + ": delta_r must be > 0");
}

// outermost 5% of the grid must stay below 1e-6 of the peak
bool boundary_contaminated(const Eigen::VectorXcd& u) {
    const int n = static_cast<int>(u.size());
    const int tail = std::max(1, n / 20);
    double peak = 0.0, edge = 0.0;
    for (int j = 0; j < n; ++j) {
        const double a = std::abs(u[j]);
        peak = std::max(peak, a);
        if (j >= n - tail) edge = std::max(edge, a);
    }
    return edge > 1e-6 * peak;
}

}  // namespace

MomentSeries crank_nicolson_evolve(const RadialState& initial, double dt,
                                   std::int64_t n_steps, int sample_every,
                                   RadialState* final_state) {
    check_state(initial, "crank_nicolson_evolve");
    const double h = initial.grid.spacing;
    if (!(dt > 0.0))
        throw std::domain_error("crank_nicolson_evolve: dt must be > 0");
    if (dt > 4.0 * h * h * (1.0 + 1e-12))
        throw std::domain_error(
            "crank_nicolson_evolve: dt exceeds the accuracy guard 4 spacing^2");
    if (n_steps < 0)
        throw std::domain_error("crank_nicolson_evolve: n_steps must be >= 0");
    if (sample_every < 1)
        throw std::domain_error(
            "crank_nicolson_evolve: sample_every must be >= 1");

    const int n = initial.grid.n_points;
    const int dim = initial.dimension;

    // A x^{m+1} = B x^m with A = I + i dt/2 H, B = I - i dt/2 H.  When V is
    // nonzero the plain stencil on u radiates from the origin: u ~
    // r^{(N-1)/2} has an unbounded fourth derivative there, and the O(h^2)
    // local defect at the first points travels out at the lattice group
    // velocity and trips the box-edge monitor.  Instead discretize the
    // equivalent operator -(1/2) w^{-1} (w psi')' on psi = u / r^{(N-1)/2}
    // in flux form with weights w = r^{N-1}, which is exact on the
    // zero-energy mode psi = const (so the origin produces no spurious
    // radiation) and reproduces 1/h^2 + V^(N)(r_j) to O(h^2) away from it.
    // The first cell spans [0, 3h/2] with zero flux at r = 0 (regularity);
    // its volume makes x_0 = u_0 sqrt((3/2)^N / N) while x_j = u_j for
    // j >= 1.  H is symmetric, so Crank-Nicolson conserves sum |x|^2
    // exactly.  For N = 2 the flux rows are defect-free everywhere: with
    // uniform faces every cell's r-centroid lands exactly on its node.  For
    // N in {1, 3} the potential vanishes and the plain Dirichlet stencil
    // (exact on the zero-energy modes u = 1 and u = r) is both consistent
    // and radiation-free, whereas the flux rows would carry a small
    // centroid-offset defect at the first cell (for N != 2 the cell
    // centroid misses the node by O(h), e.g. 1.125h vs h in the first
    // cell for N = 3, which radiates at the 1e-7 level).
    Eigen::VectorXd hdiag(n), hoff(n - 1);
    double scale0 = 1.0;
    if (dim == 1 || dim == 3) {
        hdiag.setConstant(1.0 / (h * h));
        hoff.setConstant(-0.5 / (h * h));
    } else {
        scale0 = std::sqrt(std::pow(1.5, dim) / dim);
        Eigen::VectorXd face(n);  // (face between j and j+1)^{N-1}
        Eigen::VectorXd node(n);  // cell volume / h
        for (int j = 0; j < n; ++j) {
            face[j] = std::pow((j + 1.5) * h, dim - 1);
            node[j] = std::pow(initial.grid.r(j), dim - 1);
        }
        node[0] = std::pow(1.5 * h, dim) / (dim * h);
        hdiag[0] = face[0] / (2.0 * h * h * node[0]);
        for (int j = 1; j < n; ++j)
            hdiag[j] = (face[j] + face[j - 1]) / (2.0 * h * h * node[j]);
        for (int j = 0; j + 1 < n; ++j)
            hoff[j] =
                -face[j] / (2.0 * h * h * std::sqrt(node[j] * node[j + 1]));
    }

    const cplx idt2(0.0, 0.5 * dt);
    // Thomas factorization of the constant matrix A (diagonally dominant for
    // dt <= 4h^2, so no pivoting is needed)
    Eigen::VectorXcd winv(n), cp(n - 1);
    {
        cplx w = 1.0 + idt2 * hdiag[0];
        winv[0] = 1.0 / w;
        for (int j = 1; j < n; ++j) {
            const cplx a = idt2 * hoff[j - 1];
            cp[j - 1] = a * winv[j - 1];
            w = 1.0 + idt2 * hdiag[j] - a * cp[j - 1];
            winv[j] = 1.0 / w;
        }
    }

    Eigen::VectorXcd x = initial.u;
    x[0] *= scale0;
    RadialState state = initial;
    MomentSeries series;
    series.provenance = Provenance::CrankNicolson;
    series.records.push_back(observables(state));

    Eigen::VectorXcd rhs(n), y(n);
    // Unitarity is monitored on the scheme's own conserved form sum |x|^2 h
    // (the quantity an exact Crank-Nicolson step preserves to rounding), so
    // the monitor detects solver defects and denormalized input rather than
    // the O(h^3) difference between quadratures of the continuum norm.
    const auto monitor = [&](const RadialState& st) {
        if (std::abs(x.squaredNorm() * h - 1.0) > 1e-7)
            throw NormDrift("crank_nicolson_evolve: norm drifted from 1",
                            series);
        if (boundary_contaminated(st.u))
            throw BoundaryContamination(
                "crank_nicolson_evolve: wavepacket reached the box edge",
                series);
    };
    monitor(state);

    const auto sync_state = [&](std::int64_t step) {
        state.u = x;
        state.u[0] /= scale0;
        state.time = initial.time + step * dt;
    };

    for (std::int64_t step = 1; step <= n_steps; ++step) {
        // rhs = B x
        for (int j = 0; j < n; ++j) {
            cplx v = (1.0 - idt2 * hdiag[j]) * x[j];
            if (j + 1 < n) v -= idt2 * hoff[j] * x[j + 1];
            if (j > 0) v -= idt2 * hoff[j - 1] * x[j - 1];
            rhs[j] = v;
        }
        // Thomas solve A x = rhs
        y[0] = rhs[0] * winv[0];
        for (int j = 1; j < n; ++j)
            y[j] = (rhs[j] - idt2 * hoff[j - 1] * y[j - 1]) * winv[j];
        x[n - 1] = y[n - 1];
        for (int j = n - 2; j >= 0; --j) x[j] = y[j] - cp[j] * x[j + 1];

        if (step % sample_every == 0 || step == n_steps) {
            sync_state(step);
            if (step % sample_every == 0)
                series.records.push_back(observables(state));
            monitor(state);
        }
    }
    sync_state(n_steps);
    if (final_state) *final_state = state;
    return series;
}

// ---------------------------------------------------------------------------
// Spectral propagation.  Both bases diagonalize the reduced Hamiltonian on
// the Dirichlet box exactly: sin(k r) for N=3 (V=0), and J0(k r) sqrt(r) for
// N=2, where u = psi sqrt(2 pi r) maps the -1/(8r^2) problem back to the
// regular 2D free particle.

namespace {

// DST-I of x (length n) via an odd extension of length 2(n+1):
// out_m = sum_j x_j sin(pi m j / (n+1)), m = 1..n.
Eigen::VectorXcd dst1(const Eigen::VectorXcd& x) {
    const int n = static_cast<int>(x.size());
    const int len = 2 * (n + 1);
    Eigen::VectorXcd ext = Eigen::VectorXcd::Zero(len), freq(len);
    for (int j = 0; j < n; ++j) {
        ext[j + 1] = x[j];
        ext[len - 1 - j] = -x[j];
    }
    Eigen::FFT<double> fft;
    fft.fwd(freq, ext);
    Eigen::VectorXcd out(n);
    for (int m = 0; m < n; ++m) out[m] = cplx(0.0, 0.5) * freq[m + 1];
    return out;
}

}  // namespace

SpectralPropagator::SpectralPropagator(const RadialGrid& grid, int dimension)
    : grid_(grid), dimension_(dimension) {
    const int n = grid.n_points;
    if (dimension == 3) {
        k_ = Eigen::VectorXd::LinSpaced(n, 1, n) * (pi / grid.r_max);
        mode_weight_ = Eigen::VectorXd::Ones(n);
    } else if (dimension == 2) {
        const auto zeros = detail::bessel_j0_zeros(n);
        k_.resize(n);
        mode_weight_.resize(n);
        basis_.resize(n, n);
        for (int m = 0; m < n; ++m) {
            k_[m] = zeros[m] / grid.r_max;
            const double j1 = detail::bessel_j1(zeros[m]);
            mode_weight_[m] = j1 * j1;
            for (int j = 0; j < n; ++j)
                basis_(j, m) = bessel_j0(k_[m] * grid.r(j));
        }
        lu_.compute(basis_);
    } else {
        throw std::domain_error(
            "SpectralPropagator: only N in {2,3} is supported");
    }
}

Eigen::VectorXcd SpectralPropagator::coefficients(
    const RadialState& state) const {
    const int n = grid_.n_points;
    if (dimension_ == 3) return dst1(state.u);
    Eigen::VectorXcd psi(n);
    for (int j = 0; j < n; ++j)
        psi[j] = state.u[j] / std::sqrt(2.0 * pi * grid_.r(j));
    const Eigen::VectorXd cre = lu_.solve(psi.real().eval());
    const Eigen::VectorXd cim = lu_.solve(psi.imag().eval());
    Eigen::VectorXcd c(n);
    for (int m = 0; m < n; ++m) c[m] = cplx(cre[m], cim[m]);
    return c;
}

Eigen::VectorXcd SpectralPropagator::resum(const Eigen::VectorXcd& c) const {
    const int n = grid_.n_points;
    if (dimension_ == 3) return dst1(c) * (2.0 / (n + 1));
    const Eigen::VectorXd re = basis_ * c.real().eval();
    const Eigen::VectorXd im = basis_ * c.imag().eval();
    Eigen::VectorXcd u(n);
    for (int j = 0; j < n; ++j)
        u[j] = cplx(re[j], im[j]) * std::sqrt(2.0 * pi * grid_.r(j));
    return u;
}

RadialState SpectralPropagator::propagate(const RadialState& initial,
                                          double tau) const {
    check_state(initial, "SpectralPropagator::propagate");
    if (!(initial.grid == grid_) || initial.dimension != dimension_)
        throw std::invalid_argument(
            "SpectralPropagator::propagate: state does not match this basis");
    if (tau < 0.0)
        throw std::domain_error(
            "SpectralPropagator::propagate: tau must be >= 0");
    const double t = tau * initial.delta_r * initial.delta_r;
    Eigen::VectorXcd c = coefficients(initial);
    for (int m = 0; m < c.size(); ++m)
        c[m] *= std::exp(cplx(0.0, -0.5 * k_[m] * k_[m] * t));
    RadialState out = initial;
    out.u = resum(c);
    out.time = initial.time + t;
    return out;
}

double SpectralPropagator::asymptotic_momentum(
    const RadialState& initial) const {
    const Eigen::VectorXcd c = coefficients(initial);
    double num = 0.0, den = 0.0;
    for (int m = 0; m < c.size(); ++m) {
        const double w = mode_weight_[m] * std::norm(c[m]);
        num += k_[m] * w;
        den += w;
    }
    return num / den;
}

RadialState spectral_free_propagate(const RadialState& initial, double tau) {
    return SpectralPropagator(initial.grid, initial.dimension)
        .propagate(initial, tau);
}

MomentSeries spectral_moment_series(const RadialState& initial,
                                    double tau_max, int samples) {
    if (!(tau_max > 0.0))
        throw std::domain_error("spectral_moment_series: tau_max must be > 0");
    if (samples < 2)
        throw std::domain_error("spectral_moment_series: samples must be >= 2");
    const SpectralPropagator prop(initial.grid, initial.dimension);
    MomentSeries series;
    series.provenance = Provenance::Spectral;
    series.records.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double tau = tau_max * i / (samples - 1);
        series.records.push_back(observables(prop.propagate(initial, tau)));
    }
    return series;
}

MomentSeries analytic_moment_series(int n_dim, double tau_max, int samples) {
    if (!(tau_max > 0.0))
        throw std::domain_error("analytic_moment_series: tau_max must be > 0");
    if (samples < 2)
        throw std::domain_error("analytic_moment_series: samples must be >= 2");
    MomentSeries series;
    series.provenance = Provenance::Analytic;
    series.records.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        MomentRecord rec;
        rec.tau = tau_max * i / (samples - 1);
        rec.mean_r = mean_radius_gamma2(n_dim, rec.tau);
        rec.mean_p = mean_momentum_gamma2(n_dim, rec.tau);
        rec.units = MomentUnits::Scaled;
        series.records.push_back(rec);
    }
    return series;
}

std::optional<GammaMinimum> find_implosion(const MomentSeries& series) {
    const auto& rec = series.records;
    const std::size_t n = rec.size();
    if (n < 16)
        throw InsufficientSampling("find_implosion: need at least 16 records");

    // First descent past a noise floor, then ride the non-increasing stretch
    // to its end.  The floor matters: a discretized evolution of a packet
    // whose <r> is exactly constant (the reduced 3D displaced Gaussian, say)
    // drifts downward by O(1e-8) relative, which must not read as an
    // implosion, while the shallowest physical dip in use is ~2e-4.
    const double tol = 1e-6 * rec[0].mean_r;
    double running_max = rec[0].mean_r;
    std::size_t i = 1;
    while (i < n && rec[i].mean_r >= running_max - tol) {
        running_max = std::max(running_max, rec[i].mean_r);
        ++i;
    }
    if (i == n) return std::nullopt;  // non-decreasing throughout
    while (i + 1 < n && rec[i + 1].mean_r <= rec[i].mean_r) ++i;
    if (i < 2 || i + 2 >= n)
        throw InsufficientSampling(
            "find_implosion: minimum within 2 samples of the series end");

    const double t0 = rec[i - 1].tau, t1 = rec[i].tau, t2 = rec[i + 1].tau;
    const double f0 = rec[i - 1].mean_r, f1 = rec[i].mean_r,
                 f2 = rec[i + 1].mean_r;
    const double num = (t1 - t0) * (t1 - t0) * (f1 - f2) -
                       (t1 - t2) * (t1 - t2) * (f1 - f0);
    const double den =
        (t1 - t0) * (f1 - f2) - (t1 - t2) * (f1 - f0);
    const double tv = t1 - 0.5 * num / den;
    // Lagrange quadratic through the three samples, evaluated at the vertex
    const double fv =
        f0 * (tv - t1) * (tv - t2) / ((t0 - t1) * (t0 - t2)) +
        f1 * (tv - t0) * (tv - t2) / ((t1 - t0) * (t1 - t2)) +
        f2 * (tv - t0) * (tv - t1) / ((t2 - t0) * (t2 - t1));
    GammaMinimum out;
    out.tau_min = tv;
    out.r_min_ratio = fv / rec[0].mean_r;
    return out;
}

}  // namespace swave
