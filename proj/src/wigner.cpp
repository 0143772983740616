#include "swave/wigner.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "swave/specialfn.hpp"

// The packet psi(s) = (normalization/sqrt(S_N)) s^gamma e^{-s^2/2 delta^2} is
// real, so
//   psi(x+y) psi(x-y) = C^2 Q(r, y) e^{-(r^2+|y|^2)/delta^2},
//   Q = [((r+y1)^2 + t^2)((r-y1)^2 + t^2)]^gamma  (t = transverse |y|),
// and the e^{2ip.y} kernel reduces to cos products: the product is even in y1
// (swapping the two psi factors) and in the transverse components separately,
// which kills every sine term.  The Gaussian factor e^{-|y|^2/delta^2} is
// exactly the Gauss-Hermite weight after y = delta t, so the y quadrature is
// GH in the longitudinal component tensored with GH (N=2) or with
// Gauss-Legendre panels against rho J0(b rho) (N=3, after the azimuthal
// integral).  GH with m nodes resolves cos(c delta t) up to c delta ~ 21 at
// m = 128 (calibrated against the closed-form Gaussian cosine moments), and
// the weights beyond |y| = 8 delta are < e^{-64}, so the quadrature lives on
// the Gaussian-weighted domain |y| <= 8 delta.

namespace swave {

namespace {

struct Rule {
    Eigen::VectorXd x, w;
};

// Gauss rule from the symmetric Jacobi matrix (Golub-Welsch): nodes are the
// eigenvalues, weights mu0 * (first eigenvector component)^2.
Rule golub_welsch(const Eigen::VectorXd& beta, double mu0) {
    const int m = static_cast<int>(beta.size()) + 1;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) jac(k, k - 1) = jac(k - 1, k) = beta[k - 1];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    Rule rule;
    rule.x = es.eigenvalues();
    rule.w = mu0 * es.eigenvectors().row(0).array().square();
    return rule;
}

std::mutex rule_mutex;

// weight e^{-t^2} on the real line
const Rule& gauss_hermite(int m) {
    std::lock_guard<std::mutex> lock(rule_mutex);
    static std::map<int, Rule> cache;
    auto it = cache.find(m);
    if (it == cache.end()) {
        Eigen::VectorXd beta(m - 1);
        for (int k = 1; k < m; ++k) beta[k - 1] = std::sqrt(0.5 * k);
        it = cache.emplace(m, golub_welsch(beta, sqrt_pi)).first;
    }
    return it->second;
}

// weight 1 on [0, 1]
const Rule& gauss_legendre01(int m) {
    std::lock_guard<std::mutex> lock(rule_mutex);
    static std::map<int, Rule> cache;
    auto it = cache.find(m);
    if (it == cache.end()) {
        Eigen::VectorXd beta(m - 1);
        for (int k = 1; k < m; ++k)
            beta[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
        Rule rule = golub_welsch(beta, 2.0);
        rule.x = (0.5 * (rule.x.array() + 1.0)).matrix();
        rule.w *= 0.5;
        it = cache.emplace(m, std::move(rule)).first;
    }
    return it->second;
}

// nodes/weights of `panels` 8-point GL panels covering [0, upper]
Rule panel_nodes(int panels, double upper) {
    const Rule& gl = gauss_legendre01(8);
    Rule out;
    out.x.resize(8 * panels);
    out.w.resize(8 * panels);
    const double width = upper / panels;
    for (int k = 0; k < panels; ++k)
        for (int i = 0; i < 8; ++i) {
            out.x[8 * k + i] = (k + gl.x[i]) * width;
            out.w[8 * k + i] = gl.w[i] * width;
        }
    return out;
}

// polynomial factor of psi(x+y) psi(x-y): [(s+^2)(s-^2)]^{gamma/2} with
// squared radii s+-^2 = (r -+ y1)^2 + t2
inline double pair_power(double r, double y1, double t2, double gamma) {
    const double sp = (r + y1) * (r + y1) + t2;
    const double sm = (r - y1) * (r - y1) + t2;
    if (gamma == 0.0) return 1.0;
    if (gamma == 2.0) return sp * sm;
    return std::pow(sp * sm, 0.5 * gamma);
}

// squared amplitude of the full wavefunction, N^2 / S_N
double amplitude_sq(const WavePacketSpec& spec) {
    const double nn = normalization_constant(spec);
    return nn * nn / solid_angle(spec.dimension);
}

void require_supported(const WavePacketSpec& spec, const char* who) {
    validate(spec);
    if (spec.family != PacketFamily::PowerGaussian)
        throw std::invalid_argument(std::string(who) +
                                    ": only PowerGaussian packets supported");
    if (spec.dimension != 2 && spec.dimension != 3)
        throw std::invalid_argument(std::string(who) +
                                    ": dimension must be 2 or 3");
}

// GH node count resolving cos(c t); calibrated, conservative (m = 128 was
// measured exact to 1e-14 at c = 21).
int hermite_order(double c) {
    return std::max(48, static_cast<int>(std::ceil(c * c / 3.2)) + 24);
}

}  // namespace

double wigner_value(const WavePacketSpec& spec, const PhasePoint& point) {
    require_supported(spec, "wigner_value");
    if (!(point.r >= 0.0) || !(point.p >= 0.0))
        throw std::domain_error("wigner_value: r and p must be >= 0");
    if (!(std::abs(point.cos_theta) <= 1.0))
        throw std::domain_error("wigner_value: cos_theta must be in [-1,1]");

    const double d = spec.delta_r, r = point.r, mu = point.cos_theta;
    // the Gaussian envelope bounds |W| <= poly * e^{-(p delta)^2}
    if (point.p * d >= 10.0) return 0.0;
    const double a = 2.0 * point.p * mu;
    const double b = 2.0 * point.p * std::sqrt(1.0 - mu * mu);
    const double c2 = amplitude_sq(spec);
    const Rule& gh = gauss_hermite(hermite_order(2.0 * point.p * d));
    const int m = static_cast<int>(gh.x.size());

    double sum = 0.0;
    if (spec.dimension == 2) {
        for (int i = 0; i < m; ++i) {
            const double y1 = d * gh.x[i];
            double inner = 0.0;
            for (int j = 0; j < m; ++j) {
                const double y2 = d * gh.x[j];
                inner += gh.w[j] * pair_power(r, y1, y2 * y2, spec.gamma) *
                         std::cos(b * y2);
            }
            sum += gh.w[i] * std::cos(a * y1) * inner;
        }
        return std::pow(pi, -2) * c2 * std::exp(-r * r / (d * d)) * d * d *
               sum;
    }
    // N = 3: transverse integral int_0^{8 delta} rho e^{-rho^2/d^2} Q J0(b rho)
    const int rho_panels =
        std::max(16, static_cast<int>(std::ceil(2.6 * point.p * d)) + 8);
    const Rule rho = panel_nodes(rho_panels, 8.0 * d);
    const int nr = static_cast<int>(rho.x.size());
    Eigen::VectorXd tw(nr);
    for (int k = 0; k < nr; ++k)
        tw[k] = rho.w[k] * rho.x[k] * std::exp(-rho.x[k] * rho.x[k] / (d * d)) *
                bessel_j0(b * rho.x[k]);
    for (int i = 0; i < m; ++i) {
        const double y1 = d * gh.x[i];
        double inner = 0.0;
        for (int k = 0; k < nr; ++k)
            inner += tw[k] * pair_power(r, y1, rho.x[k] * rho.x[k], spec.gamma);
        sum += gh.w[i] * std::cos(a * y1) * inner;
    }
    return 2.0 * std::pow(pi, -2) * c2 * std::exp(-r * r / (d * d)) * d * sum;
}

namespace {

struct VolumePair {
    double v_minus = 0.0, v_plus = 0.0;
};

// One full pass at the given outer resolution.  Work is organized so each
// radius slice is an independent pure computation (a GEMM against
// precomputed kernels) reduced in fixed index order; slices could run
// concurrently with the same deterministic result.
VolumePair volume_pass(const WavePacketSpec& spec, int radial_panels,
                       int angular_nodes, int hermite_nodes, int rho_panels) {
    const int dim = spec.dimension;
    const double d = spec.delta_r;
    const double c2 = amplitude_sq(spec);

    const Rule& gh = gauss_hermite(hermite_nodes);
    const int m = static_cast<int>(gh.x.size());
    const Eigen::VectorXd y = d * gh.x;

    const Rule rr = panel_nodes(radial_panels, 10.0 * d);
    const Rule pp = panel_nodes(radial_panels, 10.0 / d);
    const Rule& ang = gauss_legendre01(angular_nodes);
    const int nrad = static_cast<int>(rr.x.size());
    const int nmom = static_cast<int>(pp.x.size());
    const int nang = static_cast<int>(ang.x.size());
    const int ncol = nmom * nang;

    // angular variable: theta in [0, pi/2] (x4) for N=2, mu in [0,1] (x2)
    // for N=3; W depends on the angle through mu^2 only.
    Eigen::VectorXd mu(nang), ang_w(nang);
    for (int q = 0; q < nang; ++q) {
        if (dim == 2) {
            mu[q] = std::cos(0.5 * pi * ang.x[q]);
            ang_w[q] = 4.0 * 0.5 * pi * ang.w[q];
        } else {
            mu[q] = ang.x[q];
            ang_w[q] = 2.0 * ang.w[q];
        }
    }

    // longitudinal cosine kernel, and transverse kernel (cosines for N=2,
    // weighted Bessel for N=3), one column per (p, angle) pair
    Eigen::MatrixXd ca(m, ncol);
    const int ntr = dim == 2 ? m : 8 * rho_panels;
    Eigen::MatrixXd tr(ntr, ncol);
    Rule rho;
    if (dim == 3) rho = panel_nodes(rho_panels, 8.0 * d);
    for (int l = 0; l < nmom; ++l)
        for (int q = 0; q < nang; ++q) {
            const int col = l * nang + q;
            const double a = 2.0 * pp.x[l] * mu[q];
            const double b = 2.0 * pp.x[l] * std::sqrt(1.0 - mu[q] * mu[q]);
            for (int i = 0; i < m; ++i) ca(i, col) = std::cos(a * y[i]);
            if (dim == 2)
                for (int j = 0; j < m; ++j) tr(j, col) = std::cos(b * y[j]);
            else
                for (int k = 0; k < ntr; ++k)
                    tr(k, col) = bessel_j0(b * rho.x[k]);
        }

    // transverse quadrature weights folded into the kernel matrix rows
    Eigen::VectorXd tw(ntr);
    if (dim == 2)
        tw = gh.w;
    else
        for (int k = 0; k < ntr; ++k)
            tw[k] = rho.w[k] * rho.x[k] *
                    std::exp(-rho.x[k] * rho.x[k] / (d * d));

    const double wig_pref = dim == 2 ? std::pow(pi, -2) * c2 * d * d
                                     : 2.0 * std::pow(pi, -2) * c2 * d;

    VolumePair out;
    Eigen::MatrixXd kernel(m, ntr), folded(m, ncol);
    for (int k = 0; k < nrad; ++k) {
        const double r = rr.x[k];
        for (int i = 0; i < m; ++i)
            for (int t = 0; t < ntr; ++t) {
                const double t2 = dim == 2 ? y[t] * y[t]
                                           : rho.x[t] * rho.x[t];
                kernel(i, t) = gh.w[i] * tw[t] *
                               pair_power(r, y[i], t2, spec.gamma);
            }
        folded.noalias() = kernel * tr;
        const Eigen::ArrayXd vals =
            (ca.array() * folded.array()).colwise().sum();
        const double pref = wig_pref * std::exp(-r * r / (d * d));
        for (int l = 0; l < nmom; ++l)
            for (int q = 0; q < nang; ++q) {
                const double w = vals[l * nang + q] * pref;
                const double measure =
                    dim == 2 ? 2.0 * pi * r * pp.x[l]
                             : 8.0 * pi * pi * r * r * pp.x[l] * pp.x[l];
                const double cell =
                    measure * rr.w[k] * pp.w[l] * ang_w[q];
                out.v_minus += cell * std::max(-w, 0.0);
                out.v_plus += cell * std::max(w, 0.0);
            }
    }
    return out;
}

}  // namespace

PhaseSpaceReport negative_volume(const WavePacketSpec& spec,
                                 const WignerResolution& resolution) {
    require_supported(spec, "negative_volume");
    if (resolution.radial_panels < 2 || resolution.angular_nodes < 2)
        throw std::invalid_argument(
            "negative_volume: need >= 2 radial panels and angular nodes");
    // p reaches 10/delta, so the GH rule must resolve c = 2 p delta = 20;
    // m = 128 is the calibrated minimum.
    if (resolution.hermite_nodes < 128)
        throw std::invalid_argument(
            "negative_volume: hermite_nodes must be >= 128");
    if (spec.dimension == 3 && resolution.rho_panels < 24)
        throw std::invalid_argument(
            "negative_volume: rho_panels must be >= 24");
    if (!(resolution.tolerance > 0.0))
        throw std::invalid_argument("negative_volume: tolerance must be > 0");

    // The inner (Gauss-Hermite / Bessel) rules are spectrally converged, so
    // refinement probes the outer panels, which carry the kink error of
    // max(+-W, 0) along the W = 0 surface.
    const VolumePair fine =
        volume_pass(spec, resolution.radial_panels, resolution.angular_nodes,
                    resolution.hermite_nodes, resolution.rho_panels);
    const VolumePair half = volume_pass(
        spec, std::max(2, resolution.radial_panels / 2),
        std::max(2, resolution.angular_nodes / 2), resolution.hermite_nodes,
        resolution.rho_panels);

    const double diff = std::abs(fine.v_minus - half.v_minus);
    if (diff > resolution.tolerance)
        throw ResolutionInsufficient(
            "negative_volume: successive refinements differ by " +
            std::to_string(diff) + " (> tolerance " +
            std::to_string(resolution.tolerance) + ")");

    PhaseSpaceReport report;
    report.dimension = spec.dimension;
    report.v_minus = fine.v_minus;
    report.v_plus = fine.v_plus;
    report.normalization_residual = fine.v_plus - fine.v_minus - 1.0;
    report.error_estimate =
        std::max({2.0 * diff, 2.0 * std::abs(report.normalization_residual),
                  1e-6});
    std::ostringstream meta;
    meta << "r,p: " << resolution.radial_panels
         << " 8-pt GL panels to 10*delta / 10/delta; angle: "
         << resolution.angular_nodes << " GL; y: " << resolution.hermite_nodes
         << " GH";
    if (spec.dimension == 3)
        meta << " x " << resolution.rho_panels << " 8-pt GL rho panels to "
             << "8*delta";
    meta << "; refined against " << std::max(2, resolution.radial_panels / 2)
         << " panels / " << std::max(2, resolution.angular_nodes / 2)
         << " angular";
    report.grid_meta = meta.str();
    return report;
}

}  // namespace swave
