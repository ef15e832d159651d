#include "lpt/verify.hpp"

#include <chrono>
#include <random>

#include "lpt/version.hpp"

namespace lpt {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / double(n - 1);
    return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    const double ratio = std::pow(hi / lo, 1.0 / double(n - 1));
    double v = lo;
    for (int i = 0; i < n; ++i, v *= ratio) out[static_cast<std::size_t>(i)] = v;
    return out;
}

Matrix random_complex(Index rows, Index cols, std::mt19937& gen) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

/// Interior strict local maxima of a curve.
std::vector<int> local_maxima(const std::vector<double>& y) {
    std::vector<int> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] > y[i + 1]) out.push_back(int(i));
    return out;
}

/// Indices of the two tallest local maxima, ascending by index.
std::vector<int> two_tallest_maxima(const std::vector<double>& y) {
    std::vector<int> peaks = local_maxima(y);
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return y[size_t(a)] > y[size_t(b)]; });
    if (peaks.size() > 2) peaks.resize(2);
    std::sort(peaks.begin(), peaks.end());
    return peaks;
}

int nearest_peak_distance(int idx, const std::vector<int>& peaks) {
    int best = std::numeric_limits<int>::max();
    for (int p : peaks) best = std::min(best, std::abs(p - idx));
    return best;
}

PTSplit spin_split(const SpinRingSpec& spec, bool mutate) {
    PTSplit split = spin_ring_split(spec);
    if (mutate) split.l1.matrix = -split.l1.matrix;
    return split;
}

EigenPair steady_seed(const SuperOp& l0) {
    return EigenPair{0.0, steady_state_exact(l0), Matrix::Identity(l0.dim(), l0.dim())};
}

struct Timer {
    Clock::time_point start = Clock::now();
    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

// ---------------------------------------------------------------------------
// Criterion 1: Penrose suite
// ---------------------------------------------------------------------------

CriterionResult criterion_penrose(const VerifyOptions&) {
    Timer timer;
    CriterionResult result;
    result.id = 1;
    result.name = "penrose_suite";

    std::mt19937 gen(101);
    double worst = 0.0;
    int checked = 0;
    for (int k = 0; k < 50; ++k) {
        const Index n = 4 + (60 * k) / 49;
        Matrix a;
        if (k % 2 == 0) {
            a = random_complex(n, n, gen);
        } else {
            const Index r = std::max<Index>(1, n / 3);
            a = random_complex(n, r, gen) * random_complex(r, n, gen);
        }
        if (k % 7 == 3) a = random_complex(n, n + 3, gen);  // a few rectangular cases

        const Pinv p = pinv(a);
        const Matrix& ap = p.matrix;
        const double na = std::max(a.norm(), 1e-300);
        const double nap = std::max(ap.norm(), 1e-300);
        worst = std::max(worst, (a * ap * a - a).norm() / na);
        worst = std::max(worst, (ap * a * ap - ap).norm() / nap);
        const Matrix aap = a * ap;
        const Matrix apa = ap * a;
        worst = std::max(worst, (aap - aap.adjoint()).norm() / std::max(aap.norm(), 1.0));
        worst = std::max(worst, (apa - apa.adjoint()).norm() / std::max(apa.norm(), 1.0));

        Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
        const Matrix u_r = svd.matrixU().leftCols(p.rank);
        worst = std::max(worst, (aap - u_r * u_r.adjoint()).norm());
        ++checked;
    }

    result.runtime_s = timer.elapsed();
    result.details = {{"matrices", checked}, {"worst_residual", worst}, {"tolerance", 1e-10}};
    result.pass = worst <= 1e-10 && result.runtime_s < 10.0;
    return result;
}

// ---------------------------------------------------------------------------
// Criterion 2: convergence order of the steady-state recursion
// ---------------------------------------------------------------------------

CriterionResult criterion_convergence_order(const VerifyOptions& options) {
    Timer timer;
    CriterionResult result;
    result.id = 2;
    result.name = "convergence_order";

    const SpinRingSpec base{3, 0.5, 0.8, 0.0, 1.0};
    const PTSplit split = spin_split(base, options.mutate_l1_sign);
    auto no_obs = [](const Matrix&) { return std::map<std::string, Complex>{}; };

    SlopeOptions slope_options;
    slope_options.exact_at = [base](double alpha) {
        SpinRingSpec spec = base;
        spec.t_coupling = alpha;
        return spin_ring_direct_liouvillian(spec);
    };

    result.pass = true;
    for (int order : {1, 2, 3}) {
        double slope = 0.0;
        std::string error;
        try {
            slope = convergence_slope(split, no_obs, "", order, 0.01, 0.1, slope_options).slope;
        } catch (const std::exception& e) {
            error = e.what();
        }
        const bool ok = error.empty() && std::abs(slope - (order + 1)) <= 0.3;
        result.details["order_" + std::to_string(order)] = {
            {"slope", slope}, {"expected", order + 1}, {"ok", ok}, {"error", error}};
        result.pass = result.pass && ok;
    }

    result.runtime_s = timer.elapsed();
    result.pass = result.pass && result.runtime_s < 60.0;
    return result;
}

// ---------------------------------------------------------------------------
// Criterion 3: eigenvalue PT on a non-degenerate decaying mode
// ---------------------------------------------------------------------------

CriterionResult criterion_eigenvalue_pt(const VerifyOptions& options) {
    Timer timer;
    CriterionResult result;
    result.id = 3;
    result.name = "eigenvalue_pt";

    const SpinRingSpec base{2, 0.5, 0.8, 1.0, 1.0};
    const PTSplit split = spin_split(base, options.mutate_l1_sign);
    const double scale = split.l0.matrix.norm();

    // deterministic seed: the isolated decaying mode with the largest Re
    SpinRingSpec uncoupled = base;
    uncoupled.t_coupling = 0.0;
    const auto pairs = uncoupled_spin_eigenpairs(uncoupled);
    int seed_idx = -1;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (pairs[k].value.real() >= -1e-6) continue;
        double gap = 1e300;
        for (std::size_t m = 0; m < pairs.size(); ++m)
            if (m != k) gap = std::min(gap, std::abs(pairs[m].value - pairs[k].value));
        if (gap <= 1e-6 * scale) continue;
        if (seed_idx < 0 || pairs[k].value.real() > pairs[size_t(seed_idx)].value.real())
            seed_idx = int(k);
    }
    if (seed_idx < 0) {
        result.details["error"] = "no isolated decaying mode found";
        result.runtime_s = timer.elapsed();
        return result;
    }
    const EigenPair& seed = pairs[size_t(seed_idx)];
    result.details["seed_eigenvalue"] = {seed.value.real(), seed.value.imag()};

    const int order = 2;
    const PTSeries series = pt_eigenpair(split, seed, order);

    // continuity tracking against the assembly-independent generator family
    const SuperOp l0_direct = spin_ring_direct_liouvillian(uncoupled);
    SpinRingSpec unit = base;
    unit.t_coupling = 1.0;
    const PTSplit direct_split{
        l0_direct,
        SuperOp{spin_ring_direct_liouvillian(unit).matrix - l0_direct.matrix, l0_direct.hilbert},
        1.0};

    const auto ts = logspace(0.01, 0.1, 7);
    std::vector<double> alphas = {0.0};
    alphas.insert(alphas.end(), ts.begin(), ts.end());
    const TrackedPath tracked = track_eigenpair(direct_split, seed, alphas);

    std::vector<double> errors;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        Complex partial = 0.0;
        double power = 1.0;
        for (int j = 0; j <= order; ++j, power *= ts[k])
            partial += power * series.eigvalue_corrections[size_t(j)];
        errors.push_back(std::abs(partial - tracked.pairs[k + 1].value));
    }
    const double slope = fit_loglog_slope(ts, errors);
    const bool slope_ok = std::abs(slope - (order + 1)) <= 0.3;
    result.details["slope"] = {{"measured", slope}, {"expected", order + 1}, {"ok", slope_ok}};

    // steady-state branch through the general recursion: Eq.-(10) zeros
    const PTSeries zero_series = pt_eigenpair(split, steady_seed(split.l0), 3);
    double worst_lambda = 0.0;
    for (int j = 1; j <= 3; ++j)
        worst_lambda = std::max(worst_lambda, std::abs(zero_series.eigvalue_corrections[size_t(j)]));
    const bool zeros_ok = worst_lambda <= 1e-12;
    result.details["steady_branch_max_lambda"] = worst_lambda;

    result.runtime_s = timer.elapsed();
    result.pass = slope_ok && zeros_ok && result.runtime_s < 60.0;
    return result;
}

// ---------------------------------------------------------------------------
// Criterion 4: spin-ring regime (N = 4, eps/gamma = 0.8, t/gamma = 0.4)
// ---------------------------------------------------------------------------

CriterionResult criterion_spin_ring_regime(const VerifyOptions& options) {
    Timer timer;
    CriterionResult result;
    result.id = 4;
    result.name = "spin_ring_regime";

    const int points = 201;
    const auto grid = linspace(-3.0, 3.0, points);
    const SpinRingObservables obs = spin_ring_observables(4);

    std::vector<Complex> exact_sm(grid.size()), order0_sm(grid.size()), pt2_sm(grid.size());
    std::vector<std::string> errors(grid.size());

    parallel_for(points, resolve_threads(options.threads), [&](int i) {
        try {
            SpinRingSpec spec{4, grid[size_t(i)], 0.8, 0.4, 1.0};
            const Matrix rho_exact = steady_state_exact(spin_ring_direct_liouvillian(spec));
            exact_sm[size_t(i)] = expectation(rho_exact, obs.sigma_minus_1);

            const PTSplit split = spin_split(spec, options.mutate_l1_sign);
            order0_sm[size_t(i)] = expectation(steady_state_exact(split.l0), obs.sigma_minus_1);

            const PTSeries series = pt_steady_state(split, 2);
            pt2_sm[size_t(i)] = expectation(assemble_truncated(series), obs.sigma_minus_1);
        } catch (const std::exception& e) {
            errors[size_t(i)] = e.what();
        }
    });

    for (const auto& e : errors) {
        if (!e.empty()) {
            result.details["error"] = e;
            result.runtime_s = timer.elapsed();
            return result;
        }
    }

    std::vector<double> exact_abs(grid.size()), order0_abs(grid.size()), pt2_abs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        exact_abs[i] = std::abs(exact_sm[i]);
        order0_abs[i] = std::abs(order0_sm[i]);
        pt2_abs[i] = std::abs(pt2_sm[i]);
    }

    // (a) order-2 strictly beats order-0 wherever order-0 misses by > 1e-3.
    // Errors are moduli of complex differences, so accidental crossings of
    // the magnitude curves do not shield order-0.
    int compared = 0, improved = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double err0 = std::abs(order0_sm[i] - exact_sm[i]);
        if (err0 <= 1e-3) continue;
        const double err2 = std::abs(pt2_sm[i] - exact_sm[i]);
        ++compared;
        if (err2 < err0) ++improved;
        worst_margin = std::min(worst_margin, err0 - err2);
    }
    const bool improvement_ok = compared > 0 && improved == compared;
    result.details["improvement"] = {{"points_compared", compared},
                                     {"points_improved", improved},
                                     {"worst_margin", worst_margin}};

    // (b) shifted asymmetric two-peak structure, PT-2 peaks near exact peaks
    const auto exact_peaks = two_tallest_maxima(exact_abs);
    const auto pt2_peaks = local_maxima(pt2_abs);
    const auto order0_peaks = two_tallest_maxima(order0_abs);

    bool peaks_ok = exact_peaks.size() == 2 && !pt2_peaks.empty();
    int worst_distance = 0;
    for (int p : exact_peaks) {
        const int dist = nearest_peak_distance(p, pt2_peaks);
        worst_distance = std::max(worst_distance, dist);
        peaks_ok = peaks_ok && dist <= 2;
    }

    int shift_steps = 0;
    for (int p : exact_peaks) shift_steps = std::max(shift_steps, nearest_peak_distance(p, order0_peaks));
    const bool shifted_ok = shift_steps >= 1;

    double asymmetry = 0.0;
    if (exact_peaks.size() == 2) {
        const double h1 = exact_abs[size_t(exact_peaks[0])], h2 = exact_abs[size_t(exact_peaks[1])];
        asymmetry = std::abs(h1 - h2) / std::max(h1, h2);
    }
    const bool asymmetric_ok = asymmetry > 1e-3;

    result.details["peaks"] = {{"exact_indices", exact_peaks},
                               {"pt2_worst_distance", worst_distance},
                               {"shift_vs_order0_steps", shift_steps},
                               {"relative_height_asymmetry", asymmetry}};

    result.runtime_s = timer.elapsed();
    result.pass = improvement_ok && peaks_ok && shifted_ok && asymmetric_ok &&
                  result.runtime_s < 300.0;
    return result;
}

// ---------------------------------------------------------------------------
// Criterion 5: non-positivity occurrence and its cure
// ---------------------------------------------------------------------------

CriterionResult criterion_nonpositivity(const VerifyOptions& options) {
    Timer timer;
    CriterionResult result;
    result.id = 5;
    result.name = "nonpositivity_and_cure";

    const auto grid = linspace(-3.0, 3.0, 201);
    const std::vector<double> couplings = {0.2, 0.4, 0.6, 0.8, 1.0};

    struct Hit {
        double t, dw, dm_min_eig, amp_min_eig;
    };
    std::vector<std::vector<Hit>> hits(couplings.size());
    std::vector<std::string> errors(couplings.size() * grid.size());
    double global_min = 0.0;

    for (std::size_t ti = 0; ti < couplings.size(); ++ti) {
        const double t = couplings[ti];
        std::vector<Hit> local(grid.size(), Hit{0, 0, 1.0, 1.0});
        parallel_for(int(grid.size()), resolve_threads(options.threads), [&](int i) {
            try {
                SpinRingSpec spec{4, grid[size_t(i)], 0.8, t, 1.0};
                const PTSplit split = spin_split(spec, options.mutate_l1_sign);
                const PTSeries series = pt_steady_state(split, 2);
                const Matrix rho_dm = assemble_truncated(series);
                const double dm_min = min_eigenvalue_hermitian(rho_dm);
                double amp_min = 1.0;
                if (dm_min < -1e-12) {
                    const double c = default_reg_c(series.state_corrections[0]);
                    const AmplitudeSeries amp = amp_pt_corrections(series.state_corrections, c);
                    amp_min = min_eigenvalue_hermitian(reconstruct_density(amp, t));
                }
                local[size_t(i)] = Hit{t, grid[size_t(i)], dm_min, amp_min};
            } catch (const std::exception& e) {
                errors[ti * grid.size() + size_t(i)] = e.what();
            }
        });
        hits[ti] = std::move(local);
    }

    int found = 0, cured = 0;
    Hit first{0, 0, 1.0, 1.0};
    for (const auto& row : hits) {
        for (const Hit& h : row) {
            global_min = std::min(global_min, h.dm_min_eig);
            if (h.dm_min_eig < -1e-12) {
                if (found == 0) first = h;
                ++found;
                if (h.amp_min_eig >= -1e-14) ++cured;
            }
        }
    }

    result.details = {{"nonpositive_points", found},
                      {"cured_points", cured},
                      {"global_min_eig_dm", global_min}};
    if (found > 0)
        result.details["first_hit"] = {{"t_over_gamma", first.t},
                                       {"delta_omega_over_gamma", first.dw},
                                       {"dm_min_eig", first.dm_min_eig},
                                       {"amp_min_eig", first.amp_min_eig}};

    result.runtime_s = timer.elapsed();
    result.pass = found > 0 && cured == found && result.runtime_s < 600.0;
    return result;
}

// ---------------------------------------------------------------------------
// Criteria 6 and 7: qubit-ring regime and c-stability (shared heavy sweep)
// ---------------------------------------------------------------------------

struct QubitRingSweepData {
    std::vector<double> grid;
    std::vector<std::string> names = {"a_1", "n_1", "sigma_minus"};
    std::map<std::string, std::vector<Complex>> exact, dm;
    std::map<double, std::map<std::string, std::vector<Complex>>> amp_by_c;
    std::vector<std::string> errors;
    double runtime_s = 0.0;
};

QubitRingSpec benchmark_qubit_spec(double dw, int cutoff = 3) {
    return QubitRingSpec{cutoff, dw, 1.0, 10.0, 0.5, 0.05, 0.05};
}

QubitRingSweepData run_qubit_ring_sweep(const VerifyOptions& options) {
    Timer timer;
    QubitRingSweepData data;
    data.grid = linspace(-3.0, 3.0, 201);
    const std::vector<double> cs = {1e-9, 1e-8, 1e-10};
    const SweepModel model = make_qubit_ring_sweep_model(10.0, 0.5, 0.05, 0.05, 3);

    const std::size_t n = data.grid.size();
    for (const auto& name : data.names) {
        data.exact[name].resize(n);
        data.dm[name].resize(n);
        for (double c : cs) data.amp_by_c[c][name].resize(n);
    }
    data.errors.resize(n);

    parallel_for(int(n), resolve_threads(options.threads), [&](int i) {
        try {
            const double dw = data.grid[size_t(i)];
            const QubitRingSpec spec = benchmark_qubit_spec(dw);

            const Matrix rho_exact = steady_state_exact(qubit_ring_direct_liouvillian(spec));
            auto exact_obs = model.observables(rho_exact, dw);

            QubitRingSystem sys = qubit_ring_split(spec);
            if (options.mutate_l1_sign) sys.split.l1.matrix = -sys.split.l1.matrix;

            const Matrix hint = model.l0_steady_hint(dw);
            PTOptions pt_options;
            pt_options.steady_state_hint = &hint;

            const PTSeries series = pt_steady_state(sys.split, 2, pt_options);
            auto dm_obs = model.observables(assemble_truncated(series), dw);

            for (const auto& name : data.names) {
                data.exact[name][size_t(i)] = exact_obs.at(name);
                data.dm[name][size_t(i)] = dm_obs.at(name);
            }

            for (std::size_t ci = 0; ci < cs.size(); ++ci) {
                // the primary c goes through the dense Z0 system; the
                // stability companions use the equivalent triangular route
                const AmplitudeSeries amp =
                    amp_pt_corrections(series.state_corrections, cs[ci], ci != 0);
                auto amp_obs = model.observables(reconstruct_density(amp, spec.g), dw);
                for (const auto& name : data.names)
                    data.amp_by_c[cs[ci]][name][size_t(i)] = amp_obs.at(name);
            }
        } catch (const std::exception& e) {
            data.errors[size_t(i)] = e.what();
        }
    });

    data.runtime_s = timer.elapsed();
    return data;
}

CriterionResult criterion_qubit_ring_regime(const QubitRingSweepData& data) {
    Timer timer;
    CriterionResult result;
    result.id = 6;
    result.name = "qubit_ring_regime";

    for (const auto& e : data.errors) {
        if (!e.empty()) {
            result.details["error"] = e;
            return result;
        }
    }

    // resonance at delta_omega = 0 in |<sigma_minus>| for exact and PT-2
    auto abs_curve = [&](const std::vector<Complex>& c) {
        std::vector<double> out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) out[i] = std::abs(c[i]);
        return out;
    };
    const auto exact_sm = abs_curve(data.exact.at("sigma_minus"));
    const auto dm_sm = abs_curve(data.dm.at("sigma_minus"));
    const int zero_idx = int((data.grid.size() - 1) / 2);  // delta_omega = 0
    const int exact_dist = nearest_peak_distance(zero_idx, local_maxima(exact_sm));
    const int dm_dist = nearest_peak_distance(zero_idx, local_maxima(dm_sm));
    const bool resonance_ok = exact_dist <= 2 && dm_dist <= 2;
    result.details["resonance"] = {{"exact_peak_distance", exact_dist},
                                   {"dm_peak_distance", dm_dist}};

    // amp and dm curves agree within 10% of the exact peak value
    bool agreement_ok = true;
    const auto& amp = data.amp_by_c.at(1e-9);
    for (const auto& name : data.names) {
        double peak = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < data.grid.size(); ++i) {
            peak = std::max(peak, std::abs(data.exact.at(name)[i]));
            worst = std::max(worst, std::abs(amp.at(name)[i] - data.dm.at(name)[i]));
        }
        const bool ok = worst <= 0.1 * peak;
        agreement_ok = agreement_ok && ok;
        result.details["agreement"][name] = {
            {"max_pairwise", worst}, {"exact_peak", peak}, {"ok", ok}};
    }

    // cutoff 3 -> 4 convergence at sampled detunings
    std::string cutoff_error;
    CutoffConvergenceReport cutoff;
    try {
        const double samples[] = {-3.0, -1.5, 0.0, 1.5, 3.0};
        cutoff = qubit_ring_cutoff_convergence(benchmark_qubit_spec(0.0), samples, 3, 4, 2, 1e-9);
    } catch (const std::exception& e) {
        cutoff_error = e.what();
    }
    const bool cutoff_ok = cutoff_error.empty() && cutoff.max_change < 1e-4;
    result.details["cutoff_3_to_4"] = {{"max_change", cutoff.max_change},
                                       {"error", cutoff_error}};

    result.runtime_s = data.runtime_s + timer.elapsed();
    result.details["sweep_runtime_s"] = data.runtime_s;
    result.pass = resonance_ok && agreement_ok && cutoff_ok && result.runtime_s < 900.0;
    return result;
}

CriterionResult criterion_c_stability(const QubitRingSweepData& data) {
    Timer timer;
    CriterionResult result;
    result.id = 7;
    result.name = "c_stability";

    for (const auto& e : data.errors) {
        if (!e.empty()) {
            result.details["error"] = e;
            return result;
        }
    }

    bool ok = true;
    double worst = 0.0;
    const std::vector<double> cs = {1e-8, 1e-9, 1e-10};
    for (std::size_t a = 0; a < cs.size(); ++a) {
        for (std::size_t b = a + 1; b < cs.size(); ++b) {
            for (const auto& name : data.names) {
                const auto& ca = data.amp_by_c.at(cs[a]).at(name);
                const auto& cb = data.amp_by_c.at(cs[b]).at(name);
                double diff = 0.0;
                for (std::size_t i = 0; i < ca.size(); ++i)
                    diff = std::max(diff, std::abs(ca[i] - cb[i]));
                worst = std::max(worst, diff);
                ok = ok && diff <= 1e-6;
            }
        }
    }
    result.details = {{"worst_pairwise_abs", worst}, {"tolerance", 1e-6}};
    result.runtime_s = timer.elapsed();
    result.pass = ok;
    return result;
}

// ---------------------------------------------------------------------------
// Criterion 8: amplitude/density consistency slope
// ---------------------------------------------------------------------------

CriterionResult criterion_amp_dm_consistency(const VerifyOptions& options) {
    Timer timer;
    CriterionResult result;
    result.id = 8;
    result.name = "amp_dm_consistency";

    const SpinRingSpec base{3, 0.5, 0.8, 0.0, 1.0};
    const PTSplit split = spin_split(base, options.mutate_l1_sign);
    const int order = 2;
    const PTSeries dm = pt_steady_state(split, order);
    const AmplitudeSeries amp =
        amp_pt_corrections(dm.state_corrections, default_reg_c(dm.state_corrections[0]));

    const auto ts = logspace(0.01, 0.1, 7);
    std::vector<double> diffs;
    for (double t : ts)
        diffs.push_back(trace_norm(reconstruct_density(amp, t) - assemble_truncated(dm, t)));
    const double slope = fit_loglog_slope(ts, diffs);

    result.details = {{"slope", slope}, {"required_min", order + 1 - 0.3}};
    result.runtime_s = timer.elapsed();
    result.pass = slope >= order + 1 - 0.3 && result.runtime_s < 60.0;
    return result;
}

// ---------------------------------------------------------------------------
// Criterion 9: shift equivalence (generalized-inverse freedom)
// ---------------------------------------------------------------------------

CriterionResult criterion_shift_equivalence(const VerifyOptions& options) {
    Timer timer;
    CriterionResult result;
    result.id = 9;
    result.name = "shift_equivalence";

    const SpinRingSpec base{3, 0.5, 0.8, 0.0, 1.0};
    const PTSplit split = spin_split(base, options.mutate_l1_sign);
    const int order = 2;

    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> shifts;
    for (int j = 0; j < order; ++j) shifts.push_back(dist(gen));

    const PTSeries plain = pt_steady_state(split, order);
    const PTSeries shifted = pt_steady_state_shifted(split, order, shifts);

    const auto ts = logspace(0.01, 0.1, 7);
    std::vector<double> diffs;
    for (double t : ts)
        diffs.push_back(trace_norm(assemble_truncated(plain, t) - assemble_truncated(shifted, t)));
    const double slope = fit_loglog_slope(ts, diffs);

    result.details = {{"slope", slope},
                      {"required_min", order + 1 - 0.3},
                      {"shifts", shifts}};
    result.runtime_s = timer.elapsed();
    result.pass = slope >= order + 1 - 0.3;
    return result;
}

// ---------------------------------------------------------------------------
// Criterion 10: determinism and the CSV contract
// ---------------------------------------------------------------------------

CriterionResult criterion_determinism(const VerifyOptions&) {
    Timer timer;
    CriterionResult result;
    result.id = 10;
    result.name = "determinism_csv_contract";

    RunConfig config;
    config.model = "spin_ring";
    config.n_sites = 3;
    config.eps_over_gamma = 0.8;
    config.t_over_gamma = 0.4;
    config.sweep = {"delta_omega_over_gamma", -1.0, 1.0, 5};
    config.pt_order = 2;
    config.threads = 1;

    const std::string csv1 = to_csv(config, run_sweep(config));
    const std::string csv2 = to_csv(config, run_sweep(config));
    RunConfig threaded = config;
    threaded.threads = 2;
    const std::string csv3 = to_csv(threaded, run_sweep(threaded));

    const bool repeat_ok = csv1 == csv2;
    const bool thread_ok = csv1 == csv3;
    const bool header_ok = csv1.rfind(std::string("# liouville-pt v") + kVersion, 0) == 0;

    result.details = {{"repeat_identical", repeat_ok},
                      {"thread_invariant", thread_ok},
                      {"header_ok", header_ok},
                      {"bytes", csv1.size()}};
    result.runtime_s = timer.elapsed();
    result.pass = repeat_ok && thread_ok && header_ok;
    return result;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options) {
    auto wanted = [&](int id) {
        return options.criteria.empty() || options.criteria.count(id) > 0;
    };

    std::vector<CriterionResult> results;
    if (wanted(1)) results.push_back(criterion_penrose(options));
    if (wanted(2)) results.push_back(criterion_convergence_order(options));
    if (wanted(3)) results.push_back(criterion_eigenvalue_pt(options));
    if (wanted(4)) results.push_back(criterion_spin_ring_regime(options));
    if (wanted(5)) results.push_back(criterion_nonpositivity(options));
    if (wanted(6) || wanted(7)) {
        const QubitRingSweepData data = run_qubit_ring_sweep(options);
        if (wanted(6)) results.push_back(criterion_qubit_ring_regime(data));
        if (wanted(7)) results.push_back(criterion_c_stability(data));
    }
    if (wanted(8)) results.push_back(criterion_amp_dm_consistency(options));
    if (wanted(9)) results.push_back(criterion_shift_equivalence(options));
    if (wanted(10)) results.push_back(criterion_determinism(options));
    return results;
}

nlohmann::json to_report(const std::vector<CriterionResult>& results) {
    nlohmann::json report = nlohmann::json::array();
    for (const auto& r : results) {
        report.push_back({{"id", r.id},
                          {"name", r.name},
                          {"pass", r.pass},
                          {"runtime_s", r.runtime_s},
                          {"details", r.details}});
    }
    return report;
}

}  // namespace lpt
