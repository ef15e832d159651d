#pragma once

#include <json.hpp>

#include "lpt/oracle.hpp"

namespace lpt {

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct SweepSpec {
    std::string parameter;
    double start = -3.0;
    double stop = 3.0;
    int points = 201;
};

struct RunConfig {
    std::string model;  // "spin_ring" | "qubit_ring"

    // spin ring, units of gamma
    double eps_over_gamma = 0.8;
    double t_over_gamma = 0.4;
    int n_sites = 4;

    // qubit ring, units of epsilon
    double kappa_over_eps = 10.0;
    double g_over_eps = 0.5;
    double gamma_a_over_eps = 0.05;
    double gamma_q_over_eps = 0.05;
    int fock_cutoff = 3;

    SweepSpec sweep;  // parameter defaults to the model's detuning
    std::vector<MethodTag> methods = {MethodTag::exact, MethodTag::unperturbed, MethodTag::dm_pt,
                                      MethodTag::amp_pt};
    int pt_order = 2;
    double reg_c = -1.0;  // < 0: per-point policy (0 for safely mixed seeds, else 1e-9)
    std::string output_dir = ".";
    int threads = 0;  // 0: LIOUVILLE_PT_THREADS env var, then hardware concurrency
};

/// Throws ConfigError on invalid configurations (CLI exit code 2).
void validate_config(const RunConfig& config);

/// Effective worker count: explicit > env LIOUVILLE_PT_THREADS > hardware.
int resolve_threads(int requested);

// ---------------------------------------------------------------------------
// Sweep execution
// ---------------------------------------------------------------------------

struct PointDiagnostics {
    double value = 0.0;            // swept parameter
    double min_eig_dm_pt = 0.0;    // smallest eigenvalue of the truncated dm-PT state
    double solvability_max = 0.0;  // worst recursion solvability residual
    double z0_condition = 0.0;     // condition estimate of the Z0 system
    double reg_c_used = 0.0;
    std::string error;  // empty on success
};

struct SweepOutcome {
    std::vector<double> grid;
    std::vector<SweepResult> results;  // one per requested method, canonical order
    std::vector<PointDiagnostics> diagnostics;
    int failed_points = 0;
    int threads_used = 1;
    double wall_time_s = 0.0;
};

/// Computes every requested method on the grid. Per-point failures are
/// recorded and skipped (NaN observables), not fatal.
SweepOutcome run_sweep(const RunConfig& config);

/// Deterministic CSV serialization of an outcome, 17 significant digits.
std::string to_csv(const RunConfig& config, const SweepOutcome& outcome);

/// Flat manifest with the full configuration and per-point diagnostics.
nlohmann::json to_manifest(const RunConfig& config, const SweepOutcome& outcome);

/// One SVG line plot (|value| per method) for the named observable.
std::string to_svg(const RunConfig& config, const SweepOutcome& outcome,
                   const std::string& observable);

/// run_sweep + write sweep.csv, manifest.json and one SVG per observable into
/// config.output_dir. Returns 0 on success, 1 when any grid point failed.
int run_and_write(const RunConfig& config);

/// Work-queue parallelism over independent jobs; results must be written to
/// preallocated slots so ordering never depends on scheduling.
void parallel_for(int jobs, int threads, const std::function<void(int)>& body);

SweepModel make_model(const RunConfig& config);

}  // namespace lpt
