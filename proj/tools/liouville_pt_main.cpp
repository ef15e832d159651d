#include <CLI11.hpp>
#include <cstdio>
#include <fstream>

#include "lpt/verify.hpp"
#include "lpt/version.hpp"

namespace {

lpt::SweepSpec parse_sweep(const std::string& text, const std::string& model) {
    lpt::SweepSpec sweep;
    sweep.parameter = model == "spin_ring" ? "delta_omega_over_gamma" : "delta_omega_over_eps";
    if (text.empty()) return sweep;

    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = text.find(':', pos);
        parts.push_back(text.substr(pos, next == std::string::npos ? next : next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (parts.size() != 4)
        throw lpt::ConfigError("--sweep expects parameter:start:stop:points, got '" + text + "'");
    try {
        sweep.parameter = parts[0];
        sweep.start = std::stod(parts[1]);
        sweep.stop = std::stod(parts[2]);
        sweep.points = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw lpt::ConfigError("--sweep has non-numeric fields: '" + text + "'");
    }
    return sweep;
}

std::vector<lpt::MethodTag> parse_methods(const std::string& text) {
    std::vector<lpt::MethodTag> methods;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = text.find(',', pos);
        const std::string name = text.substr(pos, next == std::string::npos ? next : next - pos);
        if (name == "exact")
            methods.push_back(lpt::MethodTag::exact);
        else if (name == "order0")
            methods.push_back(lpt::MethodTag::unperturbed);
        else if (name == "dm_pt")
            methods.push_back(lpt::MethodTag::dm_pt);
        else if (name == "amp_pt")
            methods.push_back(lpt::MethodTag::amp_pt);
        else
            throw lpt::ConfigError("unknown method '" + name + "'");
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return methods;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state perturbation theory for Markovian open quantum systems"};
    app.set_version_flag("--version", std::string("liouville-pt v") + lpt::kVersion);
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "Sweep a model and write CSV/JSON/SVG outputs");
    lpt::RunConfig config;
    std::string sweep_text, methods_text = "exact,order0,dm_pt,amp_pt";
    double gammas_over_eps = -1.0;

    run_cmd->add_option("--model", config.model, "spin_ring | qubit_ring")->required();
    run_cmd->add_option("--eps-over-gamma", config.eps_over_gamma, "drive strength (spin ring)");
    run_cmd->add_option("--t-over-gamma", config.t_over_gamma, "flip-flop coupling (spin ring)");
    run_cmd->add_option("--n-sites", config.n_sites, "ring length (spin ring)");
    run_cmd->add_option("--kappa-over-eps", config.kappa_over_eps, "photon hopping (qubit ring)");
    run_cmd->add_option("--g-over-eps", config.g_over_eps, "qubit coupling (qubit ring)");
    run_cmd->add_option("--gammas-over-eps", gammas_over_eps,
                        "sets both gamma_a and gamma_q (qubit ring)");
    run_cmd->add_option("--gamma-a-over-eps", config.gamma_a_over_eps, "photon decay");
    run_cmd->add_option("--gamma-q-over-eps", config.gamma_q_over_eps, "qubit relaxation");
    run_cmd->add_option("--fock-cutoff", config.fock_cutoff, "Fock levels per displaced mode");
    run_cmd->add_option("--sweep", sweep_text, "parameter:start:stop:points");
    run_cmd->add_option("--methods", methods_text, "subset of exact,order0,dm_pt,amp_pt");
    run_cmd->add_option("--order", config.pt_order, "perturbation order M");
    run_cmd->add_option("--reg-c", config.reg_c, "correction-matrix parameter (default: policy)");
    run_cmd->add_option("--output", config.output_dir, "output directory");
    run_cmd->add_option("--threads", config.threads,
                        "worker threads (0: LIOUVILLE_PT_THREADS or hardware)");

    // --- verify ------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance criteria");
    std::vector<int> criteria;
    std::string report_path = "verify.json";
    lpt::VerifyOptions verify_options;
    verify_cmd->add_option("--criteria", criteria, "criterion ids to run (default: all)");
    verify_cmd->add_option("--output", report_path, "report file");
    verify_cmd->add_option("--threads", verify_options.threads, "worker threads");
    verify_cmd->add_flag("--mutate-l1-sign", verify_options.mutate_l1_sign,
                         "negative control: inject a sign error into L1")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) {
            if (gammas_over_eps >= 0.0) {
                config.gamma_a_over_eps = gammas_over_eps;
                config.gamma_q_over_eps = gammas_over_eps;
            }
            config.sweep = parse_sweep(sweep_text, config.model);
            config.methods = parse_methods(methods_text);
            lpt::validate_config(config);
            const int status = lpt::run_and_write(config);
            if (status != 0)
                std::fprintf(stderr, "liouville-pt: some grid points failed; see manifest.json\n");
            return status;
        }

        verify_options.criteria.insert(criteria.begin(), criteria.end());
        const auto results = lpt::run_acceptance(verify_options);
        bool all_pass = true;
        for (const auto& r : results) {
            std::printf("[%s] criterion %d (%s): %.1f s\n", r.pass ? "PASS" : "FAIL", r.id,
                        r.name.c_str(), r.runtime_s);
            all_pass = all_pass && r.pass;
        }
        std::ofstream out(report_path);
        out << lpt::to_report(results).dump(2) << "\n";
        std::printf("report written to %s\n", report_path.c_str());
        return all_pass ? 0 : 1;
    } catch (const lpt::ConfigError& e) {
        std::fprintf(stderr, "liouville-pt: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "liouville-pt: %s\n", e.what());
        return 1;
    }
}
