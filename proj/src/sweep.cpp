#include "lpt/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "lpt/version.hpp"

namespace lpt {

namespace {

std::vector<MethodTag> canonical_methods(const std::vector<MethodTag>& requested) {
    std::vector<MethodTag> out;
    for (MethodTag tag : {MethodTag::exact, MethodTag::unperturbed, MethodTag::dm_pt,
                          MethodTag::amp_pt}) {
        if (std::find(requested.begin(), requested.end(), tag) != requested.end())
            out.push_back(tag);
    }
    return out;
}

bool wants(const std::vector<MethodTag>& methods, MethodTag tag) {
    return std::find(methods.begin(), methods.end(), tag) != methods.end();
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct PointValues {
    // per method, per observable
    std::map<std::string, std::map<std::string, Complex>> values;
    PointDiagnostics diag;
};

PointValues compute_point(const SweepModel& model, const RunConfig& config, double x) {
    PointValues out;
    out.diag.value = x;
    const std::vector<MethodTag> methods = canonical_methods(config.methods);
    const Complex nan_c{kNan, kNan};

    auto fill_nan = [&](MethodTag tag) {
        for (const auto& name : model.observable_names)
            out.values[method_name(tag)][name] = nan_c;
    };

    try {
        if (wants(methods, MethodTag::exact)) {
            const Matrix rho = steady_state_exact(model.direct_at(x));
            out.values["exact"] = model.observables(rho, x);
        }

        const bool needs_split = wants(methods, MethodTag::unperturbed) ||
                                 wants(methods, MethodTag::dm_pt) ||
                                 wants(methods, MethodTag::amp_pt);
        if (!needs_split) return out;

        const PTSplit split = model.split_at(x);

        PTOptions pt_options;
        Matrix hint;
        if (model.l0_steady_hint) {
            hint = model.l0_steady_hint(x);
            pt_options.steady_state_hint = &hint;
        }

        if (wants(methods, MethodTag::unperturbed)) {
            const Matrix rho0 = model.l0_steady_hint ? hint : steady_state_exact(split.l0);
            out.values["order0"] = model.observables(rho0, x);
        }

        if (wants(methods, MethodTag::dm_pt) || wants(methods, MethodTag::amp_pt)) {
            const PTSeries series = pt_steady_state(split, config.pt_order, pt_options);
            out.diag.solvability_max = series.solvability_max;

            const Matrix rho_dm = assemble_truncated(series);
            out.diag.min_eig_dm_pt = min_eigenvalue_hermitian(rho_dm);
            if (wants(methods, MethodTag::dm_pt))
                out.values["dm_pt"] = model.observables(rho_dm, x);

            if (wants(methods, MethodTag::amp_pt)) {
                const double c = config.reg_c >= 0.0 ? config.reg_c
                                                     : default_reg_c(series.state_corrections[0]);
                out.diag.reg_c_used = c;
                const AmplitudeSeries amp = amp_pt_corrections(series.state_corrections, c);
                out.diag.z0_condition = amp.z0_condition;
                const Matrix rho_amp = reconstruct_density(amp, split.coupling);
                out.values["amp_pt"] = model.observables(rho_amp, x);
            }
        }
    } catch (const std::exception& e) {
        out.diag.error = e.what();
        for (MethodTag tag : methods)
            if (out.values.find(method_name(tag)) == out.values.end()) fill_nan(tag);
    }
    return out;
}

}  // namespace

void validate_config(const RunConfig& config) {
    if (config.model != "spin_ring" && config.model != "qubit_ring")
        throw ConfigError("unknown model '" + config.model + "'");
    if (config.sweep.points < 2) throw ConfigError("sweep needs at least 2 points");
    if (config.pt_order < 0) throw ConfigError("pt_order must be >= 0");
    if (config.methods.empty()) throw ConfigError("at least one method required");
    if (config.model == "spin_ring" && config.n_sites < 2)
        throw ConfigError("spin_ring needs n_sites >= 2");
    if (config.model == "qubit_ring" && config.fock_cutoff < 2)
        throw ConfigError("qubit_ring needs fock_cutoff >= 2");
    if (config.threads < 0) throw ConfigError("threads must be >= 0");

    const std::string expected = config.model == "spin_ring" ? "delta_omega_over_gamma"
                                                             : "delta_omega_over_eps";
    if (!config.sweep.parameter.empty() && config.sweep.parameter != expected)
        throw ConfigError("model '" + config.model + "' sweeps '" + expected + "', got '" +
                          config.sweep.parameter + "'");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LIOUVILLE_PT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || jobs <= 1) {
        for (int i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, jobs);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

SweepModel make_model(const RunConfig& config) {
    if (config.model == "spin_ring")
        return make_spin_ring_sweep_model(config.eps_over_gamma, config.t_over_gamma,
                                          config.n_sites);
    return make_qubit_ring_sweep_model(config.kappa_over_eps, config.g_over_eps,
                                       config.gamma_a_over_eps, config.gamma_q_over_eps,
                                       config.fock_cutoff);
}

SweepOutcome run_sweep(const RunConfig& config) {
    validate_config(config);
    const auto t0 = std::chrono::steady_clock::now();

    const SweepModel model = make_model(config);
    SweepOutcome outcome;
    outcome.threads_used = resolve_threads(config.threads);

    const int n = config.sweep.points;
    outcome.grid.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        outcome.grid[static_cast<std::size_t>(i)] =
            config.sweep.start + (config.sweep.stop - config.sweep.start) * i / double(n - 1);

    std::vector<PointValues> points(static_cast<std::size_t>(n));
    parallel_for(n, outcome.threads_used, [&](int i) {
        points[static_cast<std::size_t>(i)] =
            compute_point(model, config, outcome.grid[static_cast<std::size_t>(i)]);
    });

    for (MethodTag tag : canonical_methods(config.methods)) {
        SweepResult result;
        result.method_tag = tag;
        result.grid = outcome.grid;
        result.metadata = model.parameters;
        result.metadata["pt_order"] = config.pt_order;
        result.metadata["reg_c"] = config.reg_c;
        for (const auto& name : model.observable_names) {
            auto& series = result.observables[name];
            series.reserve(points.size());
            for (const auto& p : points) {
                const auto mit = p.values.find(method_name(tag));
                if (mit == p.values.end()) {
                    series.push_back(Complex{kNan, kNan});
                    continue;
                }
                const auto oit = mit->second.find(name);
                series.push_back(oit == mit->second.end() ? Complex{kNan, kNan} : oit->second);
            }
        }
        outcome.results.push_back(std::move(result));
    }

    outcome.diagnostics.reserve(points.size());
    for (auto& p : points) {
        if (!p.diag.error.empty()) ++outcome.failed_points;
        outcome.diagnostics.push_back(std::move(p.diag));
    }
    outcome.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return outcome;
}

std::string to_csv(const RunConfig& config, const SweepOutcome& outcome) {
    const SweepModel model = make_model(config);
    std::string csv = std::string("# liouville-pt v") + kVersion + "\n";

    csv += model.sweep_parameter;
    for (const auto& result : outcome.results) {
        const std::string method = method_name(result.method_tag);
        for (const auto& name : model.observable_names) {
            csv += "," + method + "_" + name + "_re";
            csv += "," + method + "_" + name + "_im";
        }
    }
    csv += "\n";

    for (std::size_t i = 0; i < outcome.grid.size(); ++i) {
        csv += format_g17(outcome.grid[i]);
        for (const auto& result : outcome.results) {
            for (const auto& name : model.observable_names) {
                const Complex v = result.observables.at(name)[i];
                csv += "," + format_g17(v.real());
                csv += "," + format_g17(v.imag());
            }
        }
        csv += "\n";
    }
    return csv;
}

nlohmann::json to_manifest(const RunConfig& config, const SweepOutcome& outcome) {
    const SweepModel model = make_model(config);
    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["model"] = config.model;
    manifest["csv_file"] = "sweep.csv";
    manifest["pt_order"] = config.pt_order;
    manifest["reg_c"] = config.reg_c;
    manifest["reg_c_policy"] = config.reg_c >= 0.0 ? "explicit" : "auto";
    manifest["threads_used"] = outcome.threads_used;
    manifest["wall_time_s"] = outcome.wall_time_s;
    manifest["failed_points"] = outcome.failed_points;

    nlohmann::json params;
    for (const auto& [key, value] : model.parameters) params[key] = value;
    manifest["parameters"] = params;

    manifest["sweep"] = {{"parameter", model.sweep_parameter},
                         {"start", config.sweep.start},
                         {"stop", config.sweep.stop},
                         {"points", config.sweep.points}};

    std::vector<std::string> method_names;
    for (const auto& result : outcome.results) method_names.push_back(method_name(result.method_tag));
    manifest["methods"] = method_names;

    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < outcome.diagnostics.size(); ++i) {
        const PointDiagnostics& d = outcome.diagnostics[i];
        nlohmann::json p;
        p["index"] = i;
        p["value"] = d.value;
        p["min_eig_dm_pt"] = d.min_eig_dm_pt;
        p["solvability_max"] = d.solvability_max;
        p["z0_condition"] = d.z0_condition;
        p["reg_c_used"] = d.reg_c_used;
        if (d.error.empty())
            p["error"] = nullptr;
        else
            p["error"] = d.error;
        points.push_back(std::move(p));
    }
    manifest["points"] = std::move(points);
    return manifest;
}

std::string to_svg(const RunConfig& config, const SweepOutcome& outcome,
                   const std::string& observable) {
    const SweepModel model = make_model(config);
    const int width = 800, height = 500;
    const int ml = 70, mr = 160, mt = 40, mb = 60;

    // magnitude curves per method
    std::vector<std::pair<std::string, std::vector<double>>> curves;
    double ymax = 0.0;
    for (const auto& result : outcome.results) {
        std::vector<double> ys;
        ys.reserve(outcome.grid.size());
        for (const Complex& v : result.observables.at(observable)) {
            const double a = std::abs(v);
            ys.push_back(a);
            if (std::isfinite(a)) ymax = std::max(ymax, a);
        }
        curves.emplace_back(method_name(result.method_tag), std::move(ys));
    }
    if (ymax <= 0.0) ymax = 1.0;
    const double xmin = outcome.grid.front(), xmax = outcome.grid.back();

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - y / ymax * (height - mt - mb); };

    const std::map<std::string, std::string> style = {
        {"exact", "stroke=\"black\" stroke-width=\"1.6\""},
        {"order0", "stroke=\"blue\" stroke-width=\"1.4\" stroke-dasharray=\"2,3\""},
        {"dm_pt", "stroke=\"red\" stroke-width=\"1.4\" stroke-dasharray=\"7,3\""},
        {"amp_pt", "stroke=\"green\" stroke-width=\"0.9\""}};

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">|" + observable + "| (" + config.model +
           ")</text>\n";

    // axes
    svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(height - mb) +
           "\" x2=\"" + std::to_string(width - mr) + "\" y2=\"" + std::to_string(height - mb) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) + "\" x2=\"" +
           std::to_string(ml) + "\" y2=\"" + std::to_string(height - mb) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(px(xmin)) + "\" y=\"" + std::to_string(height - mb + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           format_g17(xmin).substr(0, 6) + "</text>\n";
    svg += "<text x=\"" + std::to_string(px(xmax)) + "\" y=\"" + std::to_string(height - mb + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           format_g17(xmax).substr(0, 6) + "</text>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" +
           std::to_string(height - mb + 40) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           model.sweep_parameter + "</text>\n";
    svg += "<text x=\"" + std::to_string(ml - 12) + "\" y=\"" + std::to_string(py(ymax) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
           format_g17(ymax).substr(0, 8) + "</text>\n";
    svg += "<text x=\"" + std::to_string(ml - 12) + "\" y=\"" + std::to_string(py(0.0) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">0</text>\n";

    int legend_y = mt + 10;
    for (const auto& [method, ys] : curves) {
        std::string pts;
        for (std::size_t i = 0; i < outcome.grid.size(); ++i) {
            if (!std::isfinite(ys[i])) continue;
            pts += std::to_string(px(outcome.grid[i])) + "," + std::to_string(py(ys[i])) + " ";
        }
        const std::string& st = style.at(method);
        svg += "<polyline fill=\"none\" " + st + " points=\"" + pts + "\"/>\n";
        svg += "<line x1=\"" + std::to_string(width - mr + 10) + "\" y1=\"" +
               std::to_string(legend_y) + "\" x2=\"" + std::to_string(width - mr + 40) +
               "\" y2=\"" + std::to_string(legend_y) + "\" " + st + "/>\n";
        svg += "<text x=\"" + std::to_string(width - mr + 48) + "\" y=\"" +
               std::to_string(legend_y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"13\">" + method + "</text>\n";
        legend_y += 22;
    }
    svg += "</svg>\n";
    return svg;
}

int run_and_write(const RunConfig& config) {
    validate_config(config);
    std::filesystem::create_directories(config.output_dir);

    const SweepOutcome outcome = run_sweep(config);
    const SweepModel model = make_model(config);
    const std::filesystem::path dir(config.output_dir);

    {
        std::ofstream csv(dir / "sweep.csv", std::ios::binary);
        if (!csv) throw ConfigError("cannot write to output directory " + config.output_dir);
        csv << to_csv(config, outcome);
    }
    {
        std::ofstream mf(dir / "manifest.json", std::ios::binary);
        mf << to_manifest(config, outcome).dump(2) << "\n";
    }
    for (const auto& name : model.observable_names) {
        std::ofstream svg(dir / (name + ".svg"), std::ios::binary);
        svg << to_svg(config, outcome, name);
    }
    return outcome.failed_points > 0 ? 1 : 0;
}

}  // namespace lpt
