#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lpt/sweep.hpp"

using namespace lpt;

namespace {

RunConfig tiny_config() {
    RunConfig config;
    config.model = "spin_ring";
    config.n_sites = 2;
    config.eps_over_gamma = 0.8;
    config.t_over_gamma = 0.3;
    config.sweep = {"delta_omega_over_gamma", -1.0, 1.0, 3};
    config.pt_order = 2;
    config.threads = 1;
    return config;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_SUITE("sweep") {

    TEST_CASE("config validation") {
        RunConfig config = tiny_config();
        config.model = "bogus";
        CHECK_THROWS_AS(validate_config(config), ConfigError);

        config = tiny_config();
        config.sweep.points = 1;
        CHECK_THROWS_AS(validate_config(config), ConfigError);

        config = tiny_config();
        config.methods.clear();
        CHECK_THROWS_AS(validate_config(config), ConfigError);

        config = tiny_config();
        config.sweep.parameter = "delta_omega_over_eps";  // wrong model parameter
        CHECK_THROWS_AS(validate_config(config), ConfigError);

        CHECK_NOTHROW(validate_config(tiny_config()));
    }

    TEST_CASE("minimal run: two-row CSV with order0 only") {
        RunConfig config = tiny_config();
        config.sweep.points = 2;
        config.methods = {MethodTag::unperturbed};
        const SweepOutcome outcome = run_sweep(config);
        CHECK(outcome.failed_points == 0);

        const std::string csv = to_csv(config, outcome);
        // header comment + column names + 2 data rows
        CHECK(count_lines(csv) == 4);
        CHECK(csv.rfind("# liouville-pt v", 0) == 0);

        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        CHECK(line == "delta_omega_over_gamma,order0_sigma_minus_1_re,order0_sigma_minus_1_im,"
                      "order0_n_sigma_1_re,order0_n_sigma_1_im");
    }

    TEST_CASE("per-method values: order0 matches exact at t = 0") {
        RunConfig config = tiny_config();
        config.t_over_gamma = 0.0;
        const SweepOutcome outcome = run_sweep(config);
        REQUIRE(outcome.results.size() == 4);
        const auto& exact = outcome.results[0];
        const auto& order0 = outcome.results[1];
        for (std::size_t i = 0; i < outcome.grid.size(); ++i) {
            CHECK(std::abs(exact.observables.at("sigma_minus_1")[i] -
                           order0.observables.at("sigma_minus_1")[i]) <= 1e-10);
        }
    }

    TEST_CASE("thread invariance and repeatability") {
        RunConfig config = tiny_config();
        config.sweep.points = 5;
        const std::string csv1 = to_csv(config, run_sweep(config));
        const std::string csv2 = to_csv(config, run_sweep(config));
        CHECK(csv1 == csv2);

        RunConfig threaded = config;
        threaded.threads = 2;
        const std::string csv3 = to_csv(threaded, run_sweep(threaded));
        CHECK(csv1 == csv3);
    }

    TEST_CASE("manifest records config, diagnostics and per-point status") {
        RunConfig config = tiny_config();
        const SweepOutcome outcome = run_sweep(config);
        const nlohmann::json manifest = to_manifest(config, outcome);

        CHECK(manifest["model"] == "spin_ring");
        CHECK(manifest["pt_order"] == 2);
        CHECK(manifest["sweep"]["points"] == 3);
        CHECK(manifest["points"].size() == 3);
        CHECK(manifest["failed_points"] == 0);
        for (const auto& p : manifest["points"]) {
            CHECK(p.contains("min_eig_dm_pt"));
            CHECK(p.contains("solvability_max"));
            CHECK(p.contains("z0_condition"));
            CHECK(p["error"].is_null());
        }
        CHECK(manifest["parameters"]["eps_over_gamma"] == 0.8);
    }

    TEST_CASE("run_and_write produces csv, manifest and one svg per observable") {
        const std::filesystem::path dir =
            std::filesystem::temp_directory_path() / "lpt_sweep_test";
        std::filesystem::remove_all(dir);

        RunConfig config = tiny_config();
        config.output_dir = dir.string();
        CHECK(run_and_write(config) == 0);

        CHECK(std::filesystem::exists(dir / "sweep.csv"));
        CHECK(std::filesystem::exists(dir / "manifest.json"));
        CHECK(std::filesystem::exists(dir / "sigma_minus_1.svg"));
        CHECK(std::filesystem::exists(dir / "n_sigma_1.svg"));

        std::ifstream svg_in(dir / "sigma_minus_1.svg");
        std::stringstream svg;
        svg << svg_in.rdbuf();
        CHECK(svg.str().find("<svg") != std::string::npos);
        for (const char* method : {"exact", "order0", "dm_pt", "amp_pt"})
            CHECK(svg.str().find(method) != std::string::npos);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("parallel_for covers every job exactly once") {
        std::vector<std::atomic<int>> counts(97);
        parallel_for(97, 3, [&](int i) { counts[size_t(i)].fetch_add(1); });
        for (const auto& c : counts) CHECK(c.load() == 1);
    }

    TEST_CASE("thread count resolution: explicit, environment, hardware") {
        CHECK(resolve_threads(3) == 3);
        setenv("LIOUVILLE_PT_THREADS", "5", 1);
        CHECK(resolve_threads(0) == 5);
        unsetenv("LIOUVILLE_PT_THREADS");
        CHECK(resolve_threads(0) >= 1);
    }

    TEST_CASE("per-point failures are recorded, not fatal") {
        // forcing c = 0 on the vacuum-product seed makes the amplitude seed
        // singular at every point; the sweep must finish with NaN cells and
        // per-point error strings
        RunConfig config;
        config.model = "qubit_ring";
        config.fock_cutoff = 2;
        config.sweep = {"delta_omega_over_eps", 0.0, 1.0, 2};
        config.methods = {MethodTag::dm_pt, MethodTag::amp_pt};
        config.reg_c = 0.0;
        config.threads = 1;
        const SweepOutcome outcome = run_sweep(config);
        CHECK(outcome.failed_points == 2);
        for (const auto& d : outcome.diagnostics) CHECK(!d.error.empty());
        const auto& amp = outcome.results[1];
        for (const Complex& v : amp.observables.at("a_1")) CHECK(std::isnan(v.real()));
    }

    TEST_CASE("qubit ring model validates and runs a single cheap point") {
        RunConfig config;
        config.model = "qubit_ring";
        config.fock_cutoff = 2;
        config.sweep = {"delta_omega_over_eps", 0.0, 1.0, 2};
        config.methods = {MethodTag::unperturbed, MethodTag::dm_pt, MethodTag::amp_pt};
        config.pt_order = 2;
        config.threads = 1;
        const SweepOutcome outcome = run_sweep(config);
        CHECK(outcome.failed_points == 0);
        REQUIRE(outcome.results.size() == 3);
        // reg-c policy must have kicked in: the vacuum-product seed is singular
        for (const auto& d : outcome.diagnostics) CHECK(d.reg_c_used == 1e-9);
    }

}  // TEST_SUITE
