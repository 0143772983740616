#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "swave/analytic.hpp"
#include "swave/evolve.hpp"
#include "swave/packets.hpp"
#include "swave/validate.hpp"
#include "swave/wigner.hpp"

// CSV/JSON front end.  Exit codes: 0 success, 2 config error (nothing
// written), 3 numerical failure (evolve flushes the partial series first).

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

struct RunConfig {
    std::string family = "power";
    double gamma = 2.0;
    double delta_r = 1.0;
    double rho = 0.0;
    int dim = 2;
    std::vector<int> dims{2};      // moments takes a dimension list
    double tau_max = 2.0;
    int samples = 64;
    std::vector<double> taus;      // explicit tau grid (moments)
    std::vector<double> gammas;    // sweep-gamma list
    double r_max = 0.0;            // grid overrides; 0 = packet default
    int n_points = 0;
    double dt = 0.0;
    std::string method;
    std::string units = "scaled";
    double tolerance = 0.0;        // wigner error budget; 0 = default
    std::string config_path;
    std::string output;            // empty = stdout
};

// Fixed CSV float format: 12 significant digits, '.' separator.  to_chars
// keeps the output byte-identical across runs and locales.
std::string num12(double v) {
    char buf[40];
    if (v == 0.0) v = 0.0;  // never print -0
    const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                   std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

// Precedence: command-line flags > JSON config > built-in defaults.  A JSON
// key is applied only when the matching flag exists on the subcommand and
// was not passed explicitly.
void apply_config(const CLI::App* sub, RunConfig& cfg) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in)
        throw std::invalid_argument("config: cannot open " + cfg.config_path);
    const json j = json::parse(in);
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be an object");

    static const std::set<std::string> known{"family", "gamma",   "delta_r",
                                             "rho",    "dim",     "tau_max",
                                             "samples", "grid",   "method"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw std::invalid_argument("config: unknown key '" + item.key() +
                                        "'");

    const auto take = [&](const json& src, const char* key, const char* flag,
                          auto&& set) {
        if (!src.contains(key)) return;
        const auto* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr || opt->count() > 0) return;
        set(src.at(key));
    };
    take(j, "family", "--family",
         [&](const json& v) { cfg.family = v.get<std::string>(); });
    take(j, "gamma", "--gamma", [&](const json& v) {
        cfg.gamma = v.get<double>();
        cfg.gammas = {cfg.gamma};
    });
    take(j, "delta_r", "--delta-r",
         [&](const json& v) { cfg.delta_r = v.get<double>(); });
    take(j, "rho", "--rho", [&](const json& v) { cfg.rho = v.get<double>(); });
    take(j, "dim", "--dim", [&](const json& v) {
        cfg.dim = v.get<int>();
        cfg.dims = {cfg.dim};
    });
    take(j, "tau_max", "--tau-max",
         [&](const json& v) { cfg.tau_max = v.get<double>(); });
    take(j, "samples", "--samples",
         [&](const json& v) { cfg.samples = v.get<int>(); });
    take(j, "method", "--method",
         [&](const json& v) { cfg.method = v.get<std::string>(); });
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_object())
            throw std::invalid_argument("config: grid must be an object");
        for (const auto& item : g.items())
            if (item.key() != "r_max" && item.key() != "n" &&
                item.key() != "dt")
                throw std::invalid_argument("config: unknown grid key '" +
                                            item.key() + "'");
        take(g, "r_max", "--r-max",
             [&](const json& v) { cfg.r_max = v.get<double>(); });
        take(g, "n", "--n", [&](const json& v) { cfg.n_points = v.get<int>(); });
        take(g, "dt", "--dt", [&](const json& v) { cfg.dt = v.get<double>(); });
    }
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.delta_r > 0.0))
        throw std::invalid_argument("delta_r must be > 0");
    if (cfg.rho < 0.0) throw std::invalid_argument("rho must be >= 0");
    if (cfg.dim < 1 || cfg.dim > 6)
        throw std::invalid_argument("dim must be in [1, 6]");
    for (int d : cfg.dims)
        if (d < 1 || d > 6)
            throw std::invalid_argument("dim must be in [1, 6]");
    if (!(cfg.tau_max > 0.0) || cfg.tau_max > 100.0)
        throw std::invalid_argument("tau_max must be in (0, 100]");
    if (cfg.samples < 0 || cfg.samples > 1000000)
        throw std::invalid_argument("samples must be in [0, 1e6]");
    for (double t : cfg.taus)
        if (!(t >= 0.0) || t > 100.0)
            throw std::invalid_argument("tau values must be in [0, 100]");
    if (cfg.r_max < 0.0 || cfg.dt < 0.0 || cfg.n_points < 0)
        throw std::invalid_argument("grid overrides must be positive");
    if (cfg.units != "scaled" && cfg.units != "natural")
        throw std::invalid_argument("units must be scaled|natural");
    if (cfg.tolerance < 0.0)
        throw std::invalid_argument("tolerance must be > 0");
}

swave::WavePacketSpec packet_from(const RunConfig& cfg, int dim,
                                  double gamma) {
    swave::WavePacketSpec spec;
    if (cfg.family == "power")
        spec.family = swave::PacketFamily::PowerGaussian;
    else if (cfg.family == "sine")
        spec.family = swave::PacketFamily::SineGaussian;
    else if (cfg.family == "displaced")
        spec.family = swave::PacketFamily::DisplacedGaussianReduced;
    else
        throw std::invalid_argument("family must be power|sine|displaced");
    spec.gamma = gamma;
    spec.delta_r = cfg.delta_r;
    spec.rho = cfg.rho;
    spec.dimension = dim;
    swave::validate(spec);
    return spec;
}

swave::RadialGrid grid_from(const RunConfig& cfg,
                            const swave::WavePacketSpec& spec) {
    const auto def = swave::default_grid(spec);
    return swave::RadialGrid(cfg.r_max > 0.0 ? cfg.r_max : def.r_max,
                             cfg.n_points > 0 ? cfg.n_points : def.n_points);
}

int emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        std::fflush(stdout);
        return kOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output file: " << path << "\n";
        return kConfigError;
    }
    out << content;
    out.close();
    return out ? kOk : kConfigError;
}

int run_moments(const CLI::App* sub, RunConfig cfg) {
    apply_config(sub, cfg);
    validate_config(cfg);
    std::vector<double> grid_taus = cfg.taus;
    if (grid_taus.empty() && cfg.samples > 0) {
        for (int i = 0; i < cfg.samples; ++i)
            grid_taus.push_back(cfg.samples == 1
                                    ? 0.0
                                    : cfg.tau_max * i / (cfg.samples - 1));
    }
    const bool scaled = cfg.units == "scaled";
    std::string csv = scaled ? "tau,mean_r_scaled,mean_p_scaled,source,N\n"
                             : "tau,mean_r_natural,mean_p_natural,source,N\n";
    for (int dim : cfg.dims) {
        const double r0 = swave::initial_radius_gamma2(dim, cfg.delta_r);
        const double pinf = swave::p_infinity(dim, cfg.delta_r);
        for (double tau : grid_taus) {
            double r = swave::mean_radius_gamma2(dim, tau);
            double p = swave::mean_momentum_gamma2(dim, tau);
            if (!scaled) {
                r *= r0;
                p *= pinf;
            }
            csv += num12(tau) + "," + num12(r) + "," + num12(p) +
                   ",analytic," + std::to_string(dim) + "\n";
        }
    }
    return emit(cfg.output, csv);
}

std::string series_csv(const swave::MomentSeries& series, const RunConfig& cfg,
                       const std::string& source) {
    const bool scaled = cfg.units == "scaled";
    double r_scale = 1.0, p_scale = 1.0;
    if (scaled) {
        r_scale = swave::initial_mean_radius(
            packet_from(cfg, cfg.dim, cfg.gamma));
        p_scale = swave::p_infinity(cfg.dim, cfg.delta_r);
    }
    std::string csv = scaled
                          ? "tau,mean_r_scaled,mean_p_scaled,norm,source,N\n"
                          : "tau,mean_r_natural,mean_p_natural,norm,source,N\n";
    for (const auto& rec : series.records)
        csv += num12(rec.tau) + "," + num12(rec.mean_r / r_scale) + "," +
               num12(rec.mean_p / p_scale) + "," + num12(rec.norm) + "," +
               source + "," + std::to_string(cfg.dim) + "\n";
    return csv;
}

int run_evolve(const CLI::App* sub, RunConfig cfg) {
    apply_config(sub, cfg);
    validate_config(cfg);
    if (cfg.samples < 2)
        throw std::invalid_argument("evolve needs samples >= 2");
    if (cfg.method != "cn" && cfg.method != "spectral")
        throw std::invalid_argument("method must be cn|spectral");
    const auto spec = packet_from(cfg, cfg.dim, cfg.gamma);
    const auto grid = grid_from(cfg, spec);
    const auto state = swave::reduced_wavefunction(spec, grid);

    swave::MomentSeries series;
    try {
        if (cfg.method == "spectral") {
            series = swave::spectral_moment_series(state, cfg.tau_max,
                                                   cfg.samples);
        } else {
            // Step count is rounded so the requested tau grid is hit exactly:
            // n_steps = per * (samples - 1) with dt <= the accuracy default.
            const double t_max = cfg.tau_max * cfg.delta_r * cfg.delta_r;
            const double dt_pref =
                cfg.dt > 0.0 ? cfg.dt : swave::default_time_step(grid);
            const auto per = static_cast<std::int64_t>(
                std::ceil(t_max / ((cfg.samples - 1) * dt_pref)));
            const auto n_steps = per * (cfg.samples - 1);
            series = swave::crank_nicolson_evolve(
                state, t_max / static_cast<double>(n_steps), n_steps,
                static_cast<int>(per));
        }
    } catch (const swave::EvolveError& err) {
        std::cerr << err.what() << "\n";
        emit(cfg.output, series_csv(err.partial, cfg, cfg.method));
        return kNumericalFailure;
    }

    json summary;
    try {
        const auto got = swave::find_implosion(series);
        if (got)
            summary = {{"implosion", true},
                       {"tau_min", got->tau_min},
                       {"r_min_ratio", got->r_min_ratio}};
        else
            summary = {{"implosion", false}};
    } catch (const swave::InsufficientSampling& err) {
        summary = {{"implosion", nullptr}, {"note", err.what()}};
    }
    const int rc = emit(cfg.output, series_csv(series, cfg, cfg.method));
    if (rc == kOk) std::cout << summary.dump() << "\n";
    return rc;
}

int run_wigner(const CLI::App* sub, RunConfig cfg) {
    apply_config(sub, cfg);
    validate_config(cfg);
    const auto spec = packet_from(cfg, cfg.dim, cfg.gamma);
    swave::WignerResolution res;
    if (cfg.tolerance > 0.0) res.tolerance = cfg.tolerance;
    const auto rep = swave::negative_volume(spec, res);
    const json j = {{"dimension", rep.dimension},
                    {"v_minus", rep.v_minus},
                    {"v_plus", rep.v_plus},
                    {"normalization_residual", rep.normalization_residual},
                    {"error_estimate", rep.error_estimate},
                    {"grid_meta", rep.grid_meta}};
    return emit(cfg.output, j.dump(2) + "\n");
}

int run_sweep(const CLI::App* sub, RunConfig cfg) {
    apply_config(sub, cfg);
    validate_config(cfg);
    if (cfg.gammas.empty())
        throw std::invalid_argument("sweep-gamma needs at least one --gamma");
    for (double g : cfg.gammas)
        if (!(g > 1.0))
            throw std::invalid_argument(
                "sweep-gamma requires every gamma > 1");
    if (cfg.method != "analytic" && cfg.method != "spectral")
        throw std::invalid_argument("method must be analytic|spectral");
    if (cfg.samples < 16)
        throw std::invalid_argument("sweep-gamma needs samples >= 16");

    // One propagator serves every worker; propagate() is const.
    std::optional<swave::RadialGrid> grid;
    std::optional<swave::SpectralPropagator> prop;
    if (cfg.method == "spectral") {
        grid.emplace(grid_from(cfg, packet_from(cfg, 2, cfg.gammas.front())));
        prop.emplace(*grid, 2);
    }

    struct Row {
        std::optional<swave::GammaMinimum> min;
        std::string status = "ok";
    };
    // Fan out one worker per gamma; rows are joined in input order below.
    std::vector<std::future<Row>> workers;
    for (double g : cfg.gammas)
        workers.push_back(std::async(std::launch::async, [&, g]() -> Row {
            Row row;
            try {
                if (cfg.method == "analytic") {
                    row.min = swave::general_gamma_minimum(g);
                } else {
                    const auto st = swave::reduced_wavefunction(
                        packet_from(cfg, 2, g), *grid);
                    swave::MomentSeries s;
                    s.provenance = swave::Provenance::Spectral;
                    for (int i = 0; i < cfg.samples; ++i)
                        s.records.push_back(swave::observables(prop->propagate(
                            st, cfg.tau_max * i / (cfg.samples - 1))));
                    row.min = swave::find_implosion(s);
                }
                if (row.min && !(row.min->r_min_ratio < 1.0)) {
                    row.min.reset();
                    row.status = "no-minimum";
                } else if (!row.min) {
                    row.status = "no-minimum";
                }
            } catch (const std::exception& err) {
                row.min.reset();
                row.status = "error: " + csv_safe(err.what());
            }
            return row;
        }));

    std::string csv = "gamma,tau_min,r_min_ratio,method,status\n";
    for (std::size_t i = 0; i < workers.size(); ++i) {
        const Row row = workers[i].get();
        csv += num12(cfg.gammas[i]) + ",";
        if (row.min) csv += num12(row.min->tau_min);
        csv += ",";
        if (row.min) csv += num12(row.min->r_min_ratio);
        csv += "," + cfg.method + "," + row.status + "\n";
    }
    return emit(cfg.output, csv);
}

int run_validate() {
    std::error_code ec;
    const auto self = std::filesystem::read_symlink("/proc/self/exe", ec);
    int passed = 0, total = 0;
    swave::acceptance_suite(
        ec ? "" : self.string(), [&](const swave::CriterionResult& r) {
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": "
                      << r.detail << "\n"
                      << std::flush;
            ++total;
            passed += r.pass;
        });
    std::cout << passed << "/" << total << " criteria passed\n";
    return passed == total ? kOk : kNumericalFailure;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--config", cfg.config_path, "JSON config file");
    sub->add_option("--output", cfg.output,
                    "output file (default: stdout)");
}

void add_packet(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--family", cfg.family, "power|sine|displaced");
    sub->add_option("--gamma", cfg.gamma, "power-family exponent");
    sub->add_option("--delta-r", cfg.delta_r, "packet width");
    sub->add_option("--rho", cfg.rho, "displacement (displaced family)");
    sub->add_option("--dim", cfg.dim, "dimension");
}

void add_grid(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--r-max", cfg.r_max, "box radius (default: packet-based)");
    sub->add_option("--n", cfg.n_points, "grid points (default: packet-based)");
    sub->add_option("--dt", cfg.dt, "time step (default: accuracy-based)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Free s-wave packet dynamics: closed-form moments, direct and "
        "spectral propagation, and phase-space negativity volumes."};
    app.require_subcommand(1);

    RunConfig mo, ev, wg, sw;
    mo.tau_max = 3.0;
    ev.method = "cn";
    ev.tau_max = 1.5;  // the default boxes stay clean over this horizon
    ev.samples = 128;
    sw.method = "analytic";
    sw.tau_max = 1.0;
    sw.samples = 201;

    auto* sub_m = app.add_subcommand(
        "moments", "Closed-form gamma=2 moment curves as CSV");
    add_common(sub_m, mo);
    sub_m->add_option("--dim", mo.dims, "dimension (repeatable)");
    sub_m->add_option("--tau", mo.taus,
                      "explicit tau grid point (repeatable; overrides "
                      "--samples/--tau-max)");
    sub_m->add_option("--tau-max", mo.tau_max, "uniform grid upper end");
    sub_m->add_option("--samples", mo.samples,
                      "uniform grid size (0 emits the header only)");
    sub_m->add_option("--delta-r", mo.delta_r,
                      "packet width (sets the natural-unit scales)");
    sub_m->add_option("--units", mo.units, "scaled|natural");

    auto* sub_e = app.add_subcommand(
        "evolve", "Propagate a packet; CSV series plus a summary JSON line");
    add_common(sub_e, ev);
    add_packet(sub_e, ev);
    add_grid(sub_e, ev);
    sub_e->add_option("--tau-max", ev.tau_max, "evolution horizon");
    sub_e->add_option("--samples", ev.samples, "series length");
    sub_e->add_option("--method", ev.method, "cn|spectral");
    sub_e->add_option("--units", ev.units, "scaled|natural");

    auto* sub_w = app.add_subcommand(
        "wigner", "Phase-space negativity volumes as JSON");
    add_common(sub_w, wg);
    add_packet(sub_w, wg);
    sub_w->add_option("--tolerance", wg.tolerance,
                      "volume error budget (default 0.02)");

    auto* sub_s = app.add_subcommand(
        "sweep-gamma", "Implosion minimum against gamma as CSV");
    add_common(sub_s, sw);
    sub_s->add_option("--gamma", sw.gammas, "gamma > 1 (repeatable)");
    sub_s->add_option("--delta-r", sw.delta_r, "packet width");
    sub_s->add_option("--tau-max", sw.tau_max, "search horizon (spectral)");
    sub_s->add_option("--samples", sw.samples, "series length (spectral)");
    sub_s->add_option("--method", sw.method, "analytic|spectral");
    add_grid(sub_s, sw);

    app.add_subcommand("validate", "Run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (app.got_subcommand(sub_m)) return run_moments(sub_m, mo);
        if (app.got_subcommand(sub_e)) return run_evolve(sub_e, ev);
        if (app.got_subcommand(sub_w)) return run_wigner(sub_w, wg);
        if (app.got_subcommand(sub_s)) return run_sweep(sub_s, sw);
        return run_validate();
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const swave::GridTooSmall& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const swave::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
}
