#include "swave/validate.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "swave/analytic.hpp"
#include "swave/evolve.hpp"
#include "swave/packets.hpp"
#include "swave/specialfn.hpp"
#include "swave/wigner.hpp"

namespace swave {

namespace {

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

WavePacketSpec power_spec(int dim, double gamma, double delta_r = 1.0) {
    WavePacketSpec spec;
    spec.family = PacketFamily::PowerGaussian;
    spec.gamma = gamma;
    spec.delta_r = delta_r;
    spec.dimension = dim;
    return spec;
}

CriterionResult golden_constants() {
    CriterionResult res{"golden constants", false, ""};
    const double a2 = a_coeff(2), a3 = a_coeff(3);
    const double tmin = tau_min(2).value_or(-1.0);
    const double ratio = r_min_ratio(2).value_or(-1.0);
    char four[16];
    std::snprintf(four, sizeof four, "%.4f", ratio);
    const bool ok = std::abs(a2 - 15.0 / 7.0) <= 1e-15 &&
                    std::abs(a3 - 2.0) <= 1e-15 &&
                    std::abs(tmin - 1.0 / std::sqrt(7.0)) <= 1e-12 &&
                    std::abs(ratio - std::sqrt(224.0 / 225.0)) <= 1e-12 &&
                    std::string(four) == "0.9978";
    res.pass = ok;
    res.detail = "a(2)=" + fmt(a2, 17) + " a(3)=" + fmt(a3, 17) +
                 " tau_min(2)=" + fmt(tmin, 12) + " ratio=" + fmt(ratio, 12) +
                 " -> " + four;
    return res;
}

CriterionResult implosion_dichotomy() {
    CriterionResult res{"implosion dichotomy", false, ""};
    bool ok = true;
    std::string negs;
    for (int dim = 1; dim <= 6; ++dim) {
        const bool predicted = implosion_predicate(dim);
        double min_p = 0.0;
        for (int i = 1; i <= 1000; ++i)
            min_p = std::min(min_p,
                             mean_momentum_gamma2(dim, 5.0 * i / 1000.0));
        const bool momentum_negative = min_p < 0.0;
        ok = ok && predicted == (dim == 2) && momentum_negative == (dim == 2);
        negs += (negs.empty() ? "" : " ") + std::to_string(dim) + ":" +
                fmt(min_p, 3);
    }
    res.pass = ok;
    res.detail = "predicate true only for N=2; min momentum over 1000 tau: " +
                 negs;
    return res;
}

CriterionResult solver_agreement() {
    CriterionResult res{"solver agreement with the closed form", false, ""};
    std::ostringstream detail;
    bool ok = true;
    for (int dim : {2, 3}) {
        const auto t0 = std::chrono::steady_clock::now();
        const RadialGrid cn_grid(20.0, 4096);
        const auto state = reduced_wavefunction(power_spec(dim, 2.0), cn_grid);
        const double r0 = initial_radius_gamma2(dim, 1.0);
        const double dt = default_time_step(cn_grid);
        const auto n_steps = static_cast<std::int64_t>(std::ceil(2.0 / dt));
        const int every = static_cast<int>(n_steps / 40);
        const auto cn = crank_nicolson_evolve(state, dt, n_steps, every);

        const RadialGrid sp_grid(20.0, dim == 2 ? 2048 : 4096);
        const auto sp_state =
            reduced_wavefunction(power_spec(dim, 2.0), sp_grid);
        const SpectralPropagator prop(sp_grid, dim);

        double worst_formula = 0.0, worst_methods = 0.0;
        for (const auto& rec : cn.records) {
            const double exact = mean_radius_gamma2(dim, rec.tau);
            worst_formula = std::max(
                worst_formula, std::abs(rec.mean_r / r0 - exact) / exact);
            const auto sp_rec =
                observables(prop.propagate(sp_state, rec.tau));
            worst_formula =
                std::max(worst_formula,
                         std::abs(sp_rec.mean_r / r0 - exact) / exact);
            worst_methods =
                std::max(worst_methods, std::abs(sp_rec.mean_r - rec.mean_r) /
                                            sp_rec.mean_r);
        }
        const double elapsed = seconds_since(t0);
        ok = ok && worst_formula <= 1e-3 && worst_methods <= 1e-3 &&
             elapsed <= 120.0;
        detail << "N=" << dim << ": formula " << fmt(worst_formula, 3)
               << ", methods " << fmt(worst_methods, 3) << ", "
               << fmt(elapsed, 3) << "s; ";
    }
    res.pass = ok;
    res.detail = detail.str() + "tolerance 1e-3, 120s per run";
    return res;
}

CriterionResult displaced_dichotomy() {
    CriterionResult res{"displaced packet dichotomy", false, ""};
    WavePacketSpec spec;
    spec.family = PacketFamily::DisplacedGaussianReduced;
    spec.delta_r = 0.4;
    spec.rho = 1.5;
    const RadialGrid grid(8.0, 1024);
    std::optional<GammaMinimum> found[2];
    double max_u_diff = 0.0;
    Eigen::VectorXcd u2;
    for (int dim : {2, 3}) {
        spec.dimension = dim;
        const auto state = reduced_wavefunction(spec, grid);
        if (dim == 2)
            u2 = state.u;
        else
            max_u_diff = (state.u - u2).cwiseAbs().maxCoeff();
        // the dip is shallow (~3e-4 relative) and late, so ride to tau = 2
        const SpectralPropagator prop(grid, dim);
        MomentSeries series;
        series.provenance = Provenance::Spectral;
        for (int i = 0; i < 64; ++i)
            series.records.push_back(
                observables(prop.propagate(state, 2.0 * i / 63.0)));
        found[dim - 2] = find_implosion(series);
    }
    res.pass = found[0].has_value() && !found[1].has_value() &&
               max_u_diff == 0.0;
    res.detail =
        std::string("N=2 minimum ") +
        (found[0] ? "at tau=" + fmt(found[0]->tau_min, 3) +
                        " ratio=" + fmt(found[0]->r_min_ratio, 6)
                  : "absent") +
        "; N=3 " + (found[1] ? "minimum found (unexpected)" : "absent") +
        "; initial-u difference " + fmt(max_u_diff, 2);
    return res;
}

CriterionResult sine_minimum() {
    CriterionResult res{"sine packet minimum", false, ""};
    WavePacketSpec spec;
    spec.family = PacketFamily::SineGaussian;
    spec.delta_r = 1.0;
    spec.dimension = 2;
    const auto state = reduced_wavefunction(spec, RadialGrid(20.0, 2048));
    const auto series = spectral_moment_series(state, 1.5, 301);
    const auto got = find_implosion(series);
    if (!got) {
        res.detail = "no minimum found";
        return res;
    }
    const bool tau_ok = std::abs(got->tau_min - 1.11) <= 0.05;
    const bool ratio_ok = std::abs(got->r_min_ratio - 0.9964) <= 5e-4;
    res.pass = tau_ok && ratio_ok;
    res.detail = "tau_min=" + fmt(got->tau_min, 6) + " (target 1.11+-0.05" +
                 std::string(tau_ok ? "" : ", FAILED") +
                 "), ratio=" + fmt(got->r_min_ratio, 7) +
                 " (target 0.9964+-5e-4" + (ratio_ok ? "" : ", FAILED") + ")";
    if (!tau_ok)
        res.detail +=
            "; note: the defined packet sin(r^2/d^2)e^{-r^2/2d^2} has an "
            "exact closed-form minimum at tau=0.22214 with ratio 0.996421 "
            "(both reproduced here); 5 x 0.22214 = 1.1107, i.e. the 1.11 "
            "target corresponds to measuring tau in units of the complex "
            "Gaussian width Re[d^2/(1-2i)] = d^2/5 rather than d^2";
    return res;
}

CriterionResult general_gamma() {
    CriterionResult res{"general-gamma moments", false, ""};
    std::ostringstream detail;
    bool ok = true;
    for (double tau : {0.2, 0.5, 1.0}) {
        const double general = mean_radius_general_gamma_2d(2.0, tau, 1e-8);
        const double closed = mean_radius_gamma2(2, tau);
        ok = ok && std::abs(general - closed) <= 1e-4;
        detail << "tau=" << fmt(tau, 2) << ": " << fmt(general - closed, 2)
               << "; ";
    }
    const RadialGrid grid(20.0, 2048);
    const SpectralPropagator prop(grid, 2);
    for (double gamma : {1.5, 3.0, 4.0}) {
        const auto analytic = general_gamma_minimum(gamma);
        const auto state = reduced_wavefunction(power_spec(2, gamma), grid);
        MomentSeries series;
        series.provenance = Provenance::Spectral;
        for (int i = 0; i < 201; ++i) {
            const auto rec =
                observables(prop.propagate(state, 1.0 * i / 200.0));
            series.records.push_back(rec);
        }
        const auto spectral = find_implosion(series);
        const bool has = analytic.r_min_ratio < 1.0 && spectral.has_value();
        const double ratio_diff =
            spectral ? std::abs(spectral->r_min_ratio - analytic.r_min_ratio)
                     : 1.0;
        ok = ok && has && ratio_diff <= 1e-3;
        detail << "g=" << fmt(gamma, 2) << ": ratio "
               << fmt(analytic.r_min_ratio, 6) << " (spectral diff "
               << fmt(ratio_diff, 2) << "); ";
    }
    res.pass = ok;
    res.detail = detail.str() + "tolerances 1e-4 / 1e-3";
    return res;
}

CriterionResult wigner_volumes() {
    CriterionResult res{"Wigner negativity volumes", false, ""};
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep2 = negative_volume(power_spec(2, 2.0));
    const auto rep3 = negative_volume(power_spec(3, 2.0));
    const auto rep0 = negative_volume(power_spec(2, 0.0));
    const double elapsed = seconds_since(t0);
    const bool ok =
        std::abs(rep2.v_minus - 0.27) <= 0.02 &&
        std::abs(rep3.v_minus - 0.23) <= 0.02 &&
        std::abs(rep2.normalization_residual) <= rep2.error_estimate &&
        std::abs(rep3.normalization_residual) <= rep3.error_estimate &&
        rep0.v_minus <= 1e-4 && elapsed <= 600.0;
    res.pass = ok;
    res.detail = "v-(2)=" + fmt(rep2.v_minus, 4) +
                 " v-(3)=" + fmt(rep3.v_minus, 4) +
                 " gaussian=" + fmt(rep0.v_minus, 2) + " residuals " +
                 fmt(rep2.normalization_residual, 2) + "/" +
                 fmt(rep3.normalization_residual, 2) + ", " +
                 fmt(elapsed, 3) + "s (limit 600)";
    return res;
}

CriterionResult property_suite() {
    CriterionResult res{"solver property suite", false, ""};
    std::ostringstream detail;
    // norm conservation over 1e5 steps
    const RadialGrid grid(20.0, 1024);
    const auto state = reduced_wavefunction(power_spec(2, 2.0), grid);
    const auto series = crank_nicolson_evolve(state, 2.5e-5, 100000, 10000);
    double drift = 0.0;
    for (const auto& rec : series.records)
        drift = std::max(drift, std::abs(rec.norm - 1.0));
    const bool norm_ok = drift <= 1e-7;
    detail << "norm drift " << fmt(drift, 2) << "; ";

    // Ehrenfest d<r>/dt = <p> by central differences
    const auto fine = crank_nicolson_evolve(state, 2.5e-4, 2000, 40);
    double worst_ehrenfest = 0.0;
    for (std::size_t i = 1; i + 1 < fine.records.size(); ++i) {
        const double dt_samp = fine.records[i + 1].tau - fine.records[i].tau;
        const double deriv =
            (fine.records[i + 1].mean_r - fine.records[i - 1].mean_r) /
            (2.0 * dt_samp);
        worst_ehrenfest = std::max(
            worst_ehrenfest, std::abs(deriv - fine.records[i].mean_p));
    }
    const bool ehrenfest_ok = worst_ehrenfest <= 2e-4;
    detail << "Ehrenfest " << fmt(worst_ehrenfest, 2) << "; ";

    // second-order convergence on refinement
    const double exact = initial_radius_gamma2(2, 1.0) *
                         mean_radius_gamma2(2, 1.0);
    const auto run = [&](int n, double dt) {
        const auto st =
            reduced_wavefunction(power_spec(2, 2.0), RadialGrid(20.0, n));
        const auto steps = static_cast<std::int64_t>(std::llround(1.0 / dt));
        RadialState fin = st;
        crank_nicolson_evolve(st, 1.0 / steps, steps,
                              static_cast<int>(steps), &fin);
        return observables(fin).mean_r;
    };
    const double factor = std::abs(run(512, 1.4e-3) - exact) /
                          std::abs(run(1024, 0.7e-3) - exact);
    const bool conv_ok = factor >= 3.5;
    detail << "convergence x" << fmt(factor, 3) << "; ";

    // Kummer transformation self-consistency
    double worst_kummer = 0.0;
    for (double a : {-0.4, -1.2, -2.5})
        for (double re : {-8.0, -2.0, 3.0, 10.0})
            for (double im : {-6.0, 1.0, 7.0}) {
                const cplx z(re, im);
                const cplx lhs = hyp1f1(a, 1.0, z);
                const cplx rhs = std::exp(z) * hyp1f1(1.0 - a, 1.0, -z);
                worst_kummer = std::max(
                    worst_kummer, std::abs(lhs - rhs) / std::abs(lhs));
            }
    const bool kummer_ok = worst_kummer <= 1e-8;
    detail << "Kummer " << fmt(worst_kummer, 2) << "; ";

    // short-time coefficient against finite differences
    double worst_short = 0.0;
    for (int dim : {1, 2, 3, 4}) {
        const double tau = 1e-3;
        const double fd = (mean_radius_gamma2(dim, tau) - 1.0) / (tau * tau);
        worst_short = std::max(worst_short,
                               std::abs(fd - short_time_coefficient(dim)));
    }
    const bool short_ok = worst_short <= 1e-6;
    detail << "short-time " << fmt(worst_short, 2);

    res.pass = norm_ok && ehrenfest_ok && conv_ok && kummer_ok && short_ok;
    res.detail = detail.str();
    return res;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CriterionResult csv_determinism(const std::string& cli_path) {
    CriterionResult res{"CSV byte determinism", false, ""};
    if (cli_path.empty()) {
        res.detail = "no CLI binary path provided";
        return res;
    }
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path();
    const std::string tag = std::to_string(::getpid());
    bool ok = true;
    std::string notes;
    const std::pair<const char*, const char*> runs[] = {
        {"moments", "moments --dim 2 --dim 3 --samples 64 --tau-max 3"},
        {"sweep-gamma", "sweep-gamma --gamma 1.5 --gamma 2"},
    };
    for (const auto& [name, args] : runs) {
        const fs::path f1 = dir / ("swave_det_" + tag + "_" + name + "_1.csv");
        const fs::path f2 = dir / ("swave_det_" + tag + "_" + name + "_2.csv");
        const std::string base =
            "\"" + cli_path + "\" " + args + " --output ";
        const int rc1 = std::system((base + "\"" + f1.string() + "\"").c_str());
        const int rc2 = std::system((base + "\"" + f2.string() + "\"").c_str());
        const std::string b1 = slurp(f1), b2 = slurp(f2);
        const bool same = rc1 == 0 && rc2 == 0 && !b1.empty() && b1 == b2;
        ok = ok && same;
        notes += std::string(name) + (same ? " identical (" : " DIFFER (") +
                 std::to_string(b1.size()) + " bytes); ";
        fs::remove(f1);
        fs::remove(f2);
    }
    res.pass = ok;
    res.detail = notes;
    return res;
}

}  // namespace

std::vector<CriterionResult> acceptance_suite(
    const std::string& cli_path,
    const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> results;
    const auto push = [&](CriterionResult r) {
        if (on_result) on_result(r);
        results.push_back(std::move(r));
    };
    const auto guarded = [&](const std::function<CriterionResult()>& fn,
                             const char* name) {
        try {
            push(fn());
        } catch (const std::exception& e) {
            push({name, false, std::string("exception: ") + e.what()});
        }
    };
    guarded(golden_constants, "golden constants");
    guarded(implosion_dichotomy, "implosion dichotomy");
    guarded(solver_agreement, "solver agreement with the closed form");
    guarded(displaced_dichotomy, "displaced packet dichotomy");
    guarded(sine_minimum, "sine packet minimum");
    guarded(general_gamma, "general-gamma moments");
    guarded(wigner_volumes, "Wigner negativity volumes");
    guarded(property_suite, "solver property suite");
    guarded([&] { return csv_determinism(cli_path); },
            "CSV byte determinism");
    return results;
}

}  // namespace swave
