#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "swave/analytic.hpp"

// End-to-end checks of the CSV/JSON contract through the installed binary.
// SWAVE_CLI_PATH is injected by the build; every invocation goes through
// std::system with outputs routed to a per-process temp directory.

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("swave_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args, const std::string& stdout_to = "") {
    std::string cmd = std::string("\"") + SWAVE_CLI_PATH + "\" " + args;
    if (!stdout_to.empty()) cmd += " > \"" + stdout_to + "\"";
    cmd += " 2> /dev/null";
    const int st = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(st));
    return WEXITSTATUS(st);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double num(const std::string& s) { return std::stod(s); }

}  // namespace

TEST_CASE("moments emits the closed-form rows") {
    const auto csv = work_dir() / "moments.csv";
    const int rc =
        run("moments --dim 2 --dim 3 --tau 0 --tau 0.3779644730092272 "
            "--tau 1 --output " + csv.string());
    CHECK(rc == 0);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "tau,mean_r_scaled,mean_p_scaled,source,N");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = fields(rows[i]);
        REQUIRE(f.size() == 5);
        CHECK(f[3] == "analytic");
    }
    // N=2 at the minimum: the contraction depth and vanishing momentum
    const auto mid2 = fields(rows[2]);
    CHECK(mid2[4] == "2");
    CHECK(std::abs(num(mid2[1]) - 0.9977753031) <= 1e-9);
    CHECK(std::abs(num(mid2[2])) <= 1e-12);
    // N=3 momentum is never negative
    for (int i : {4, 5, 6}) {
        const auto f = fields(rows[i]);
        CHECK(f[4] == "3");
        CHECK(num(f[2]) >= 0.0);
    }
}

TEST_CASE("moments with an empty grid emits the header only") {
    const auto csv = work_dir() / "empty.csv";
    CHECK(run("moments --samples 0 --output " + csv.string()) == 0);
    CHECK(slurp(csv) == "tau,mean_r_scaled,mean_p_scaled,source,N\n");
}

TEST_CASE("moments natural units scale by the packet constants") {
    const auto csv = work_dir() / "natural.csv";
    CHECK(run("moments --dim 2 --tau 0 --tau 1 --units natural --delta-r 2 "
              "--output " + csv.string()) == 0);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "tau,mean_r_natural,mean_p_natural,source,N");
    const double r0 = swave::initial_radius_gamma2(2, 2.0);
    const double pinf = swave::p_infinity(2, 2.0);
    CHECK(std::abs(num(fields(rows[1])[1]) - r0) <= 1e-9 * r0);
    const double want_r = r0 * swave::mean_radius_gamma2(2, 1.0);
    const double want_p = pinf * swave::mean_momentum_gamma2(2, 1.0);
    CHECK(std::abs(num(fields(rows[2])[1]) - want_r) <= 1e-9 * want_r);
    CHECK(std::abs(num(fields(rows[2])[2]) - want_p) <= 1e-9 * want_p);
}

TEST_CASE("evolve reports the displaced-shell dichotomy") {
    const auto csv = work_dir() / "disp.csv";
    const auto sum = work_dir() / "disp_summary.json";
    const std::string base =
        "evolve --family displaced --delta-r 0.4 --rho 1.5 --method spectral "
        "--r-max 8 --n 1024 --samples 64 --tau-max 2 ";
    CHECK(run(base + "--dim 2 --output " + csv.string(), sum.string()) == 0);
    auto summary = nlohmann::json::parse(slurp(sum));
    REQUIRE(summary.at("implosion").get<bool>());
    CHECK(summary.at("tau_min").get<double>() > 0.5);
    CHECK(summary.at("r_min_ratio").get<double>() < 1.0);
    CHECK(summary.at("r_min_ratio").get<double>() > 0.99);

    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 65);
    CHECK(rows[0] == "tau,mean_r_scaled,mean_p_scaled,norm,source,N");
    const auto last = fields(rows[64]);
    CHECK(std::abs(num(last[0]) - 2.0) <= 1e-12);  // exact tau grid
    // norm column: J0-collocation resummation is unitary only up to its
    // truncation error for this sharp packet at n = 1024
    CHECK(std::abs(num(last[3]) - 1.0) <= 1e-4);
    CHECK(last[4] == "spectral");
    CHECK(last[5] == "2");

    CHECK(run(base + "--dim 3 --output " + csv.string(), sum.string()) == 0);
    summary = nlohmann::json::parse(slurp(sum));
    CHECK(!summary.at("implosion").get<bool>());
    CHECK(!summary.contains("tau_min"));
}

TEST_CASE("evolve spectral gamma=2 run lands on the known minimum") {
    const auto csv = work_dir() / "power.csv";
    const auto sum = work_dir() / "power_summary.json";
    CHECK(run("evolve --family power --gamma 2 --dim 2 --method spectral "
              "--n 2048 --output " + csv.string(), sum.string()) == 0);
    const auto summary = nlohmann::json::parse(slurp(sum));
    REQUIRE(summary.at("implosion").get<bool>());
    CHECK(std::abs(summary.at("tau_min").get<double>() - 0.3779644730) <=
          2e-3);
    CHECK(std::abs(summary.at("r_min_ratio").get<double>() - 0.9977753031) <=
          1e-4);
}

TEST_CASE("evolve default stepper tracks the closed form") {
    const auto csv = work_dir() / "cn.csv";
    const auto sum = work_dir() / "cn_summary.json";
    CHECK(run("evolve --family power --gamma 2 --dim 2 --samples 16 "
              "--tau-max 0.5 --n 1024 --output " + csv.string(),
              sum.string()) == 0);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 17);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = fields(rows[i]);
        const double tau = num(f[0]);
        CHECK(std::abs(tau - 0.5 * (i - 1) / 15.0) <= 1e-12);
        const double want = swave::mean_radius_gamma2(2, tau);
        CHECK(std::abs(num(f[1]) - want) <= 1e-3 * want);
        CHECK(std::abs(num(f[3]) - 1.0) <= 1e-7);
        CHECK(f[4] == "cn");
    }
}

TEST_CASE("wigner emits the phase-space report") {
    const auto out = work_dir() / "wigner.json";
    CHECK(run("wigner --gamma 2 --dim 3 --output " + out.string()) == 0);
    const auto rep = nlohmann::json::parse(slurp(out));
    CHECK(rep.at("dimension").get<int>() == 3);
    CHECK(std::abs(rep.at("v_minus").get<double>() - 0.23) <= 0.02);
    CHECK(std::abs(rep.at("v_plus").get<double>() -
                   rep.at("v_minus").get<double>() - 1.0) <= 1e-6);
    CHECK(rep.at("error_estimate").get<double>() > 0.0);
    CHECK(!rep.at("grid_meta").get<std::string>().empty());
}

TEST_CASE("sweep-gamma rows stay in order with bounded contractions") {
    const auto csv = work_dir() / "sweep.csv";
    CHECK(run("sweep-gamma --gamma 1.5 --gamma 2 --gamma 3 --gamma 4 "
              "--output " + csv.string()) == 0);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "gamma,tau_min,r_min_ratio,method,status");
    const double want_gamma[] = {1.5, 2.0, 3.0, 4.0};
    for (int i = 1; i <= 4; ++i) {
        const auto f = fields(rows[i]);
        REQUIRE(f.size() == 5);
        CHECK(num(f[0]) == want_gamma[i - 1]);
        CHECK(f[3] == "analytic");
        CHECK(f[4] == "ok");
        const double ratio = num(f[2]);
        CHECK(1.0 - ratio > 0.0);
        CHECK(1.0 - ratio < 0.05);
    }
    const auto g2 = fields(rows[2]);
    CHECK(std::abs(num(g2[1]) - 0.378) <= 2e-3);
    CHECK(std::abs(num(g2[2]) - 0.9978) <= 1e-4);
}

TEST_CASE("config file fills in whatever flags leave unset") {
    const auto cfg = work_dir() / "run.json";
    std::ofstream(cfg) << R"({"family":"power","gamma":3.0,"dim":2,)"
                       << R"("tau_max":1.0,"samples":32,"grid":{"n":1024}})";
    const auto csv = work_dir() / "cfg.csv";
    const auto sum = work_dir() / "cfg_summary.json";
    // --gamma overrides the config; dim/tau_max/samples/grid come from it
    CHECK(run("evolve --config " + cfg.string() + " --gamma 2 --output " +
              csv.string(), sum.string()) == 0);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 33);
    const auto last = fields(rows[32]);
    CHECK(last[5] == "2");
    CHECK(std::abs(num(last[0]) - 1.0) <= 1e-12);
    const double want = swave::mean_radius_gamma2(2, 1.0);
    CHECK(std::abs(num(last[1]) - want) <= 1e-3 * want);
}

TEST_CASE("invalid configurations exit 2 and write nothing") {
    const auto out = work_dir() / "never_written.csv";
    const auto check_rejected = [&](const std::string& args) {
        CAPTURE(args);
        CHECK(run(args + " --output " + out.string()) == 2);
        CHECK(!fs::exists(out));
    };
    check_rejected("moments --dim 9");
    check_rejected("evolve --family triangle");
    check_rejected("evolve --method hopscotch");
    check_rejected("evolve --tau-max 200");
    check_rejected("sweep-gamma --gamma 0.5");
    check_rejected("wigner --gamma 2 --dim 4");
    check_rejected("wigner --family sine --dim 2");

    const auto bad = work_dir() / "bad.json";
    std::ofstream(bad) << R"({"family":"power","bogus":1})";
    check_rejected("evolve --config " + bad.string());
    std::ofstream(bad) << R"({"family":)";
    check_rejected("evolve --config " + bad.string());
}

TEST_CASE("a run that leaves its box exits 3 and flushes the partial series") {
    const auto csv = work_dir() / "partial.csv";
    const int rc =
        run("evolve --family displaced --delta-r 0.4 --rho 1.5 --dim 2 "
            "--tau-max 2 --r-max 8 --n 1024 --output " + csv.string());
    CHECK(rc == 3);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() > 16);  // most of the series was flushed
    CHECK(rows[0] == "tau,mean_r_scaled,mean_p_scaled,norm,source,N");
    CHECK(fields(rows[1]).size() == 6);
}

TEST_CASE("identical configs produce byte-identical output") {
    const auto a = work_dir() / "det_a.csv";
    const auto b = work_dir() / "det_b.csv";
    CHECK(run("moments --dim 2 --dim 3 --samples 16 --tau-max 1 --output " +
              a.string()) == 0);
    CHECK(run("moments --dim 2 --dim 3 --samples 16 --tau-max 1 --output " +
              b.string()) == 0);
    const auto ma = slurp(a), mb = slurp(b);
    CHECK(!ma.empty());
    CHECK(ma == mb);
    CHECK(run("sweep-gamma --gamma 2 --gamma 3 --output " + a.string()) == 0);
    CHECK(run("sweep-gamma --gamma 2 --gamma 3 --output " + b.string()) == 0);
    const auto sa = slurp(a), sb = slurp(b);
    CHECK(!sa.empty());
    CHECK(sa == sb);
}

TEST_CASE("validate subcommand reports the criteria honestly") {
    const auto out = work_dir() / "validate.txt";
    const int rc = run("validate", out.string());
    const auto text = slurp(out);
    // every criterion is listed with a verdict and the tally line is last
    CHECK(text.find("golden constants") != std::string::npos);
    CHECK(text.find("CSV byte determinism") != std::string::npos);
    CHECK(text.find("criteria passed") != std::string::npos);
    const auto n_pass = [&](const std::string& tag) {
        std::size_t n = 0, at = 0;
        while ((at = text.find(tag, at)) != std::string::npos) {
            ++n;
            at += tag.size();
        }
        return n;
    };
    CHECK(n_pass("[PASS]") + n_pass("[FAIL]") == 9);
    // the suite is honest: a failed criterion makes the command exit nonzero
    if (rc == 0)
        CHECK(n_pass("[FAIL]") == 0);
    else
        CHECK(n_pass("[FAIL]") > 0);
    fs::remove_all(work_dir());
}
