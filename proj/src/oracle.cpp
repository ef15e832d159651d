#include "lpt/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lpt {

namespace {

const Complex kI{0.0, 1.0};
constexpr double kOverlapThreshold = 0.7;

}  // namespace

std::string method_name(MethodTag tag) {
    switch (tag) {
        case MethodTag::exact: return "exact";
        case MethodTag::unperturbed: return "order0";
        case MethodTag::dm_pt: return "dm_pt";
        case MethodTag::amp_pt: return "amp_pt";
    }
    return "unknown";
}

SweepResult exact_sweep(const SweepModel& model, std::span<const double> grid,
                        const ExactSweepOptions& options) {
    if (model.liouville_dim > options.dim_cap)
        throw Error("exact_sweep: Liouville dim " + std::to_string(model.liouville_dim) +
                    " exceeds the configured cap " + std::to_string(options.dim_cap));

    SweepResult result;
    result.method_tag = MethodTag::exact;
    result.grid.assign(grid.begin(), grid.end());
    result.metadata = model.parameters;
    for (const auto& name : model.observable_names) result.observables[name] = {};

    for (double x : grid) {
        Matrix rho;
        try {
            rho = steady_state_exact(model.direct_at(x));
        } catch (const Error& e) {
            throw Error("exact_sweep at " + model.sweep_parameter + " = " + std::to_string(x) +
                        ": " + e.what());
        }
        if (min_eigenvalue_hermitian(rho) < -1e-12)
            throw Error("exact_sweep: steady state not PSD at " + model.sweep_parameter + " = " +
                        std::to_string(x));
        auto obs = model.observables(rho, x);
        for (const auto& name : model.observable_names) result.observables[name].push_back(obs.at(name));
    }
    return result;
}

TlsSteady tls_steady_analytic(double delta_omega, double epsilon, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("tls_steady_analytic: gamma must be > 0");
    const double q = delta_omega * delta_omega + 0.25 * gamma * gamma;
    const double denom = q + 2.0 * epsilon * epsilon;
    TlsSteady out;
    out.sigma_minus = -epsilon * Complex{delta_omega, 0.5 * gamma} / denom;
    out.pop_e = epsilon * epsilon / denom;
    return out;
}

TrackedPath track_eigenpair(const PTSplit& split, const EigenPair& seed,
                            std::span<const double> alphas) {
    if (alphas.empty()) throw std::invalid_argument("track_eigenpair: no alphas");
    const Index d = split.l0.dim();

    TrackedPath path;
    Vector prev_right = vec(seed.right).normalized();

    for (std::size_t step = 0; step < alphas.size(); ++step) {
        const double alpha = alphas[step];
        if (step == 0 && alpha == 0.0) {
            path.pairs.push_back(seed);
            path.overlaps.push_back(1.0);
            continue;
        }

        const Matrix l_alpha = split.l0.matrix + alpha * split.l1.matrix;
        Eigen::ComplexEigenSolver<Matrix> es(l_alpha, true);
        if (es.info() != Eigen::Success)
            throw Error("track_eigenpair: eigensolver failed at alpha = " + std::to_string(alpha));

        Index best = 0;
        double best_overlap = -1.0;
        for (Index k = 0; k < es.eigenvectors().cols(); ++k) {
            const double ov = std::abs(prev_right.dot(es.eigenvectors().col(k).normalized()));
            if (ov > best_overlap) {
                best_overlap = ov;
                best = k;
            }
        }
        if (best_overlap < kOverlapThreshold)
            throw TrackingLost("track_eigenpair: best overlap " + std::to_string(best_overlap) +
                               " at alpha = " + std::to_string(alpha) +
                               " (level crossing or degeneracy)");

        // Left state from the inverse row, rescaled to <sigma, rho> = 1.
        Eigen::PartialPivLU<Matrix> lu(es.eigenvectors());
        const Matrix v_inv = lu.inverse();
        EigenPair pair;
        pair.value = es.eigenvalues()(best);
        pair.right = unvec(es.eigenvectors().col(best), d, d);
        pair.left = unvec(Vector(v_inv.row(best).adjoint()), d, d);
        path.pairs.push_back(std::move(pair));
        path.overlaps.push_back(best_overlap);
        prev_right = es.eigenvectors().col(best).normalized();
    }
    return path;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need >= 2 samples");
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log10(x[i]), ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SlopeFit convergence_slope(const PTSplit& split,
                           const std::function<std::map<std::string, Complex>(const Matrix&)>& observe,
                           const std::string& observable, int order, double alpha_lo,
                           double alpha_hi, const SlopeOptions& options) {
    if (!(alpha_lo > 0.0 && alpha_hi > alpha_lo))
        throw std::invalid_argument("convergence_slope: need 0 < alpha_lo < alpha_hi");
    if (options.samples < 5)
        throw std::invalid_argument("convergence_slope: need >= 5 samples");

    const PTSeries series = pt_steady_state(split, order, options.pt);

    SlopeFit fit;
    const double ratio = std::pow(alpha_hi / alpha_lo, 1.0 / double(options.samples - 1));
    double alpha = alpha_lo;
    for (int s = 0; s < options.samples; ++s, alpha *= ratio) {
        const Matrix approx = assemble_truncated(series, alpha);
        const Matrix exact = steady_state_exact(
            options.exact_at ? options.exact_at(alpha) : total_liouvillian(split, alpha));
        double err;
        if (observable.empty()) {
            err = trace_norm(approx - exact);
        } else {
            const auto oa = observe(approx), oe = observe(exact);
            err = std::abs(oa.at(observable) - oe.at(observable));
        }
        fit.alphas.push_back(alpha);
        fit.errors.push_back(err);
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < fit.errors.size(); ++i) {
        if (fit.errors[i] > options.noise_floor) {
            xs.push_back(fit.alphas[i]);
            ys.push_back(fit.errors[i]);
        }
    }
    if (xs.size() < 5)
        throw ErrorFloor("convergence_slope: only " + std::to_string(xs.size()) +
                         " samples rise above numerical noise; slope is meaningless");
    fit.slope = fit_loglog_slope(xs, ys);
    return fit;
}

// ---------------------------------------------------------------------------
// KronLiouvilleSolver
// ---------------------------------------------------------------------------

KronLiouvilleSolver::KronLiouvilleSolver(std::vector<Matrix> subsystem_liouvillians,
                                         std::vector<Index> hilbert_dims)
    : blocks_(std::move(subsystem_liouvillians)), hdims_(std::move(hilbert_dims)) {
    if (blocks_.size() != hdims_.size() || blocks_.empty())
        throw std::invalid_argument("KronLiouvilleSolver: one block per subsystem required");

    d_ = 1;
    for (Index h : hdims_) d_ *= h;
    big_d_ = d_ * d_;
    hstrides_.resize(hdims_.size());
    Index stride = 1;
    for (std::size_t i = hdims_.size(); i-- > 0;) {
        hstrides_[i] = stride;
        stride *= hdims_[i];
    }

    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const Index local = hdims_[i] * hdims_[i];
        if (blocks_[i].rows() != local || blocks_[i].cols() != local)
            throw DimensionError("KronLiouvilleSolver: block " + std::to_string(i) +
                                 " does not match its Hilbert dim squared");
        Eigen::ComplexEigenSolver<Matrix> es(blocks_[i], true);
        if (es.info() != Eigen::Success)
            throw Error("KronLiouvilleSolver: block eigensolver failed");
        Matrix w = es.eigenvectors();
        Eigen::PartialPivLU<Matrix> lu(w);
        Matrix w_inv = lu.inverse();
        const double resid = (w_inv * w - Matrix::Identity(local, local)).cwiseAbs().maxCoeff();
        if (resid > 1e-8)
            throw Defective("KronLiouvilleSolver: block " + std::to_string(i) +
                            " eigenbasis is ill-conditioned (residual " + std::to_string(resid) + ")");

        const double scale = std::max(blocks_[i].norm(), 1e-300);
        Index null_k = 0;
        double best = std::numeric_limits<double>::infinity(), second = best;
        for (Index k = 0; k < es.eigenvalues().size(); ++k) {
            const double a = std::abs(es.eigenvalues()(k));
            if (a < best) {
                second = best;
                best = a;
                null_k = k;
            } else if (a < second) {
                second = a;
            }
        }
        if (best > 1e-9 * scale)
            throw Error("KronLiouvilleSolver: block " + std::to_string(i) + " has no zero mode");
        if (second < 1e-9 * scale)
            throw NonUniqueSteadyState("KronLiouvilleSolver: block " + std::to_string(i) +
                                       " has a degenerate zero mode");

        w_.push_back(std::move(w));
        w_inv_.push_back(std::move(w_inv));
        evals_.push_back(es.eigenvalues());
        null_idx_.push_back(null_k);
    }

    // Product of the subsystem zero modes: the right null vector of L0.
    steady_vec_ = Vector::Ones(big_d_);
    for (Index v = 0; v < big_d_; ++v) {
        const Index r = v % d_, c = v / d_;
        Complex prod{1.0, 0.0};
        for (std::size_t i = 0; i < hdims_.size(); ++i) {
            const Index ri = (r / hstrides_[i]) % hdims_[i];
            const Index ci = (c / hstrides_[i]) % hdims_[i];
            prod *= w_[i](ci * hdims_[i] + ri, null_idx_[i]);
        }
        steady_vec_(v) = prod;
    }
    steady_vec_.normalize();
}

Matrix KronLiouvilleSolver::steady_state() const {
    Matrix rho = hermitize(unvec(steady_vec_, d_, d_));
    return rho / rho.trace().real();
}

Vector KronLiouvilleSolver::contract_all(const Vector& x, bool inverse) const {
    Vector cur = x;
    Vector next(big_d_);
    for (std::size_t i = 0; i < hdims_.size(); ++i) {
        const Index h = hdims_[i], local = h * h;
        const Index sr = hstrides_[i], sc = d_ * hstrides_[i];
        const Matrix& m = inverse ? w_inv_[i] : w_[i];
        Vector u(local), t(local);
        for (Index v = 0; v < big_d_; ++v) {
            const Index r = v % d_, c = v / d_;
            if ((r / sr) % h != 0 || (c / sr) % h != 0) continue;  // not a base point
            for (Index ci = 0; ci < h; ++ci)
                for (Index ri = 0; ri < h; ++ri) u(ci * h + ri) = cur(v + ri * sr + ci * sc);
            t.noalias() = m * u;
            for (Index ci = 0; ci < h; ++ci)
                for (Index ri = 0; ri < h; ++ri) next(v + ri * sr + ci * sc) = t(ci * h + ri);
        }
        cur.swap(next);
    }
    return cur;
}

Vector KronLiouvilleSolver::apply_l0(const Vector& x) const {
    if (x.size() != big_d_) throw DimensionError("KronLiouvilleSolver::apply_l0: size mismatch");
    Vector out = Vector::Zero(big_d_);
    for (std::size_t i = 0; i < hdims_.size(); ++i) {
        const Index h = hdims_[i], local = h * h;
        const Index sr = hstrides_[i], sc = d_ * hstrides_[i];
        Vector u(local), t(local);
        for (Index v = 0; v < big_d_; ++v) {
            const Index r = v % d_, c = v / d_;
            if ((r / sr) % h != 0 || (c / sr) % h != 0) continue;
            for (Index ci = 0; ci < h; ++ci)
                for (Index ri = 0; ri < h; ++ri) u(ci * h + ri) = x(v + ri * sr + ci * sc);
            t.noalias() = blocks_[i] * u;
            for (Index ci = 0; ci < h; ++ci)
                for (Index ri = 0; ri < h; ++ri) out(v + ri * sr + ci * sc) += t(ci * h + ri);
        }
    }
    return out;
}

Vector KronLiouvilleSolver::pinv_apply(const Vector& b) const {
    if (b.size() != big_d_) throw DimensionError("KronLiouvilleSolver::pinv_apply: size mismatch");

    Index null_v = 0;
    for (std::size_t i = 0; i < hdims_.size(); ++i) {
        const Index ri = null_idx_[i] % hdims_[i], ci = null_idx_[i] / hdims_[i];
        null_v += ri * hstrides_[i] + ci * d_ * hstrides_[i];
    }

    Vector coeffs = contract_all(b, true);
    for (Index v = 0; v < big_d_; ++v) {
        if (v == null_v) {
            coeffs(v) = 0.0;
            continue;
        }
        const Index r = v % d_, c = v / d_;
        Complex lambda{0.0, 0.0};
        for (std::size_t i = 0; i < hdims_.size(); ++i) {
            const Index ri = (r / hstrides_[i]) % hdims_[i];
            const Index ci = (c / hstrides_[i]) % hdims_[i];
            lambda += evals_[i](ci * hdims_[i] + ri);
        }
        coeffs(v) /= lambda;
    }
    Vector x = contract_all(coeffs, false);
    x -= steady_vec_ * steady_vec_.dot(x);
    return x;
}

// ---------------------------------------------------------------------------
// Cutoff-convergence oracle
// ---------------------------------------------------------------------------

QubitRingMethodObservables qubit_ring_structured_observables(const QubitRingSpec& spec, int order,
                                                             double reg_c) {
    const DisplacedFrame frame = displaced_amplitudes(spec);
    const QubitRingHamiltonians hams = qubit_ring_hamiltonians(spec);
    KronLiouvilleSolver solver(qubit_ring_subsystem_liouvillians(spec),
                               {2, spec.fock_cutoff, spec.fock_cutoff, spec.fock_cutoff});

    const Matrix rho0 = solver.steady_state();
    std::vector<Matrix> corrections = {rho0};
    for (int j = 1; j <= order; ++j) {
        const Matrix& prev = corrections.back();
        const Matrix l1_prev = -kI * (hams.h1 * prev - prev * hams.h1);
        Vector next = -solver.pinv_apply(vec(l1_prev));
        corrections.push_back(hermitize(unvec(next, solver.dim(), solver.dim())));
    }

    PTSeries series;
    series.alpha = spec.g;
    series.order = order;
    series.state_corrections = corrections;
    series.eigvalue_corrections.assign(static_cast<std::size_t>(order) + 1, Complex{0.0, 0.0});

    auto to_map = [&](const Matrix& rho) {
        const LabFrameObservables lab = lab_frame_observables(rho, frame, spec.fock_cutoff);
        return std::map<std::string, Complex>{
            {"a_1", lab.a1}, {"n_1", Complex{lab.n1, 0.0}}, {"sigma_minus", lab.sigma_minus}};
    };

    QubitRingMethodObservables out;
    out.order0 = to_map(rho0);
    const AmplitudeSeries amp_series =
        amp_pt_corrections(corrections, reg_c, /*use_triangular_solver=*/true);
    out.amp_pt = to_map(reconstruct_density(amp_series, spec.g));
    out.dm_pt = to_map(assemble_truncated(series));
    return out;
}

CutoffConvergenceReport qubit_ring_cutoff_convergence(const QubitRingSpec& base,
                                                      std::span<const double> sample_deltas,
                                                      int cutoff_a, int cutoff_b, int order,
                                                      double reg_c) {
    CutoffConvergenceReport report;
    for (double dw : sample_deltas) {
        QubitRingSpec spec_a = base, spec_b = base;
        spec_a.delta_omega = dw;
        spec_a.fock_cutoff = cutoff_a;
        spec_b.delta_omega = dw;
        spec_b.fock_cutoff = cutoff_b;

        const auto obs_a = qubit_ring_structured_observables(spec_a, order, reg_c);
        const auto obs_b = qubit_ring_structured_observables(spec_b, order, reg_c);

        auto record = [&](const char* method, const std::map<std::string, Complex>& a,
                          const std::map<std::string, Complex>& b) {
            for (const auto& [name, va] : a) {
                const double change = std::abs(va - b.at(name));
                auto& slot = report.per_observable[std::string(method) + "/" + name];
                slot = std::max(slot, change);
                report.max_change = std::max(report.max_change, change);
            }
        };
        record("order0", obs_a.order0, obs_b.order0);
        record("dm_pt", obs_a.dm_pt, obs_b.dm_pt);
        record("amp_pt", obs_a.amp_pt, obs_b.amp_pt);
    }
    return report;
}

}  // namespace lpt
