#include "lpt/dm_pt.hpp"

#include <Eigen/Eigenvalues>

namespace lpt {

namespace {

constexpr double kSolvabilityTol = 1e-8;   // |<sigma_hat, f_j>| <= tol * ||f_j||
constexpr double kGapTol = 1e-8;           // relative non-degeneracy gap for seeds
constexpr double kCorrectionHermTol = 1e-10;
constexpr double kTraceTol = 1e-12;

Matrix checked_hermitian_correction(const Matrix& rho, int order_j) {
    const double scale = std::max(max_norm(rho), 1e-300);
    const double defect = max_norm(rho - rho.adjoint());
    if (defect > kCorrectionHermTol * scale)
        throw Error("pt_steady_state: correction at order " + std::to_string(order_j) +
                    " lost Hermiticity (relative defect " + std::to_string(defect / scale) + ")");
    return hermitize(rho);
}

}  // namespace

SuperOp total_liouvillian(const PTSplit& split, double alpha) {
    return SuperOp{split.l0.matrix + alpha * split.l1.matrix, split.l0.hilbert};
}

void validate_split(const PTSplit& split) {
    if (split.l0.matrix.rows() != split.l1.matrix.rows())
        throw DimensionError("PTSplit: L0 and L1 dimensions differ");
    const Index d = split.l0.dim();
    const Vector id_vec = vec(Matrix(identity(d)));
    const double s0 = std::max(1.0, max_norm(split.l0.matrix));
    const double s1 = std::max(1.0, max_norm(split.l1.matrix));
    if ((id_vec.adjoint() * split.l0.matrix).cwiseAbs().maxCoeff() > 1e-10 * s0)
        throw Error("PTSplit: L0 is not trace preserving");
    if ((id_vec.adjoint() * split.l1.matrix).cwiseAbs().maxCoeff() > 1e-10 * s1)
        throw Error("PTSplit: vec(I) is not a left null vector of L1");
}

// ---------------------------------------------------------------------------
// PinvOperator
// ---------------------------------------------------------------------------

PinvOperator PinvOperator::from_svd(const Matrix& shifted, double rel_tol) {
    PinvOperator op;
    op.svd_ = pinv(shifted, rel_tol);
    op.rank_ = op.svd_->rank;
    op.dim_ = shifted.rows();
    return op;
}

PinvOperator PinvOperator::from_null_pair(const Matrix& shifted, const Vector& right_null,
                                          const Vector& left_null) {
    const Index n = shifted.rows();
    if (right_null.size() != n || left_null.size() != n)
        throw DimensionError("PinvOperator: null vectors do not match matrix dimension");

    const Vector z = right_null.normalized();
    const Vector y = left_null.normalized();
    const double nu = std::max(shifted.norm() / std::sqrt(double(n)), 1e-300);

    Matrix bordered(n + 1, n + 1);
    bordered.topLeftCorner(n, n) = shifted;
    bordered.topRightCorner(n, 1) = nu * y;
    bordered.bottomLeftCorner(1, n) = nu * z.adjoint();
    bordered(n, n) = 0.0;

    PinvOperator op;
    op.lu_ = std::make_shared<InplaceLU>(std::move(bordered));
    const double ratio = op.lu_->pivot_ratio();
    if (!(ratio >= 1e-13))
        throw Degenerate("PinvOperator: bordered matrix nearly singular; the shifted generator "
                         "is rank deficient beyond the supplied null pair");
    op.border_scale_ = nu;
    op.rank_ = n - 1;
    op.dim_ = n;
    return op;
}

Vector PinvOperator::apply(const Vector& b) const {
    if (b.size() != dim_) throw DimensionError("PinvOperator::apply: size mismatch");
    if (svd_) return svd_->matrix * b;
    Vector rhs(dim_ + 1);
    rhs.head(dim_) = b;
    rhs(dim_) = 0.0;
    return lu_->lu.solve(rhs).head(dim_);
}

namespace {

PinvOperator make_pinv_operator(const Matrix& shifted, const Vector& right_null,
                                const Vector& left_null, const PTOptions& options) {
    switch (options.pinv_method) {
        case PinvMethod::svd:
            return PinvOperator::from_svd(shifted, options.pinv_rel_tol);
        case PinvMethod::bordered:
            return PinvOperator::from_null_pair(shifted, right_null, left_null);
        case PinvMethod::automatic:
        default:
            if (shifted.rows() <= options.svd_max_dim)
                return PinvOperator::from_svd(shifted, options.pinv_rel_tol);
            return PinvOperator::from_null_pair(shifted, right_null, left_null);
    }
}

double check_solvability(const Vector& sigma0_hat, const Vector& f, int order_j) {
    const double fnorm = f.norm();
    if (fnorm == 0.0) return 0.0;
    const double resid = std::abs(sigma0_hat.dot(f));  // Eigen dot conjugates the left factor
    if (resid > kSolvabilityTol * fnorm)
        throw SolvabilityViolation("order " + std::to_string(order_j) +
                                   ": |<sigma^(0), f_j>| = " + std::to_string(resid) +
                                   " exceeds " + std::to_string(kSolvabilityTol) + " * ||f_j||");
    return resid / fnorm;
}

}  // namespace

// ---------------------------------------------------------------------------
// General-mode recursion
// ---------------------------------------------------------------------------

PTSeries pt_eigenpair(const PTSplit& split, const EigenPair& seed, int order,
                      const PTOptions& options) {
    if (order < 0) throw std::invalid_argument("pt_eigenpair: order must be >= 0");
    validate_split(split);

    const Index d = split.l0.dim();
    const Vector rho0 = vec(seed.right);
    const Vector sigma0 = vec(seed.left);
    const Complex norm_check = sigma0.dot(rho0);
    if (std::abs(norm_check - 1.0) > 1e-8)
        throw std::invalid_argument("pt_eigenpair: seed is not bi-orthonormalized");

    // Non-degeneracy gate against the full L0 spectrum.
    {
        Eigen::ComplexEigenSolver<Matrix> es(split.l0.matrix, false);
        if (es.info() != Eigen::Success) throw Error("pt_eigenpair: L0 eigensolver failed");
        const double scale = std::max(split.l0.matrix.norm(), 1e-300);
        std::vector<double> dist;
        dist.reserve(static_cast<std::size_t>(es.eigenvalues().size()));
        for (Index i = 0; i < es.eigenvalues().size(); ++i)
            dist.push_back(std::abs(es.eigenvalues()(i) - seed.value));
        std::sort(dist.begin(), dist.end());
        if (dist.size() >= 2 && dist[1] < kGapTol * scale)
            throw Degenerate("pt_eigenpair: seed eigenvalue is degenerate within relative gap " +
                             std::to_string(dist[1] / scale));
    }

    const Matrix shifted = split.l0.matrix - seed.value * Matrix::Identity(d * d, d * d);
    const PinvOperator solver = make_pinv_operator(shifted, rho0, sigma0, options);
    const Vector sigma0_hat = sigma0.normalized();

    PTSeries series;
    series.alpha = split.coupling;
    series.order = order;
    series.eigvalue_corrections = {seed.value};
    series.state_corrections = {seed.right};

    std::vector<Vector> states = {rho0};
    for (int j = 1; j <= order; ++j) {
        const Vector l1_prev = split.l1.matrix * states[j - 1];
        Complex lam = sigma0.dot(l1_prev);
        for (int k = 1; k <= j - 1; ++k)
            lam -= series.eigvalue_corrections[k] * sigma0.dot(states[j - k]);
        series.eigvalue_corrections.push_back(lam);

        Vector f = -l1_prev;
        for (int k = 1; k <= j; ++k) f += series.eigvalue_corrections[k] * states[j - k];
        series.solvability_max = std::max(series.solvability_max,
                                          check_solvability(sigma0_hat, f, j));

        states.push_back(solver.apply(f));
        series.state_corrections.push_back(unvec(states.back(), d, d));
    }
    return series;
}

// ---------------------------------------------------------------------------
// Steady-state recursion
// ---------------------------------------------------------------------------

namespace {

PTSeries steady_state_recursion(const PTSplit& split, int order, std::span<const double> shifts,
                                const PTOptions& options) {
    if (order < 0) throw std::invalid_argument("pt_steady_state: order must be >= 0");
    if (!shifts.empty() && std::ssize(shifts) < order)
        throw std::invalid_argument("pt_steady_state_shifted: need one shift per order");
    validate_split(split);

    const Index d = split.l0.dim();
    Matrix rho0;
    if (options.steady_state_hint != nullptr) {
        rho0 = *options.steady_state_hint;
        if (rho0.rows() != d || rho0.cols() != d)
            throw DimensionError("pt_steady_state: steady-state hint has wrong dimensions");
        if (std::abs(rho0.trace() - Complex{1.0, 0.0}) > 1e-10)
            throw std::invalid_argument("pt_steady_state: steady-state hint is not unit trace");
        const double resid = (split.l0.matrix * vec(rho0)).norm();
        if (resid > 1e-10 * std::max(split.l0.matrix.norm(), 1e-300))
            throw std::invalid_argument("pt_steady_state: steady-state hint fails L0 rho = 0");
    } else {
        rho0 = steady_state_exact(split.l0);  // throws NonUniqueSteadyState
    }
    const Vector rho0_vec = vec(rho0);
    const Vector id_vec = vec(Matrix(identity(d)));

    PTSeries series;
    series.mu_label = 0;
    series.alpha = split.coupling;
    series.order = order;
    series.eigvalue_corrections.assign(static_cast<std::size_t>(order) + 1, Complex{0.0, 0.0});
    series.state_corrections = {rho0};

    if (order == 0) return series;

    const PinvOperator solver = make_pinv_operator(split.l0.matrix, rho0_vec, id_vec, options);
    const Vector sigma0_hat = id_vec.normalized();

    Vector prev = rho0_vec;
    for (int j = 1; j <= order; ++j) {
        Vector f = -(split.l1.matrix * prev);
        series.solvability_max = std::max(series.solvability_max,
                                          check_solvability(sigma0_hat, f, j));
        Vector next = solver.apply(f);
        if (!shifts.empty()) next += shifts[static_cast<std::size_t>(j) - 1] * rho0_vec;
        Matrix correction = checked_hermitian_correction(unvec(next, d, d), j);
        prev = vec(correction);
        series.state_corrections.push_back(std::move(correction));
    }
    return series;
}

}  // namespace

PTSeries pt_steady_state(const PTSplit& split, int order, const PTOptions& options) {
    return steady_state_recursion(split, order, {}, options);
}

PTSeries pt_steady_state_shifted(const PTSplit& split, int order, std::span<const double> shifts,
                                 const PTOptions& options) {
    return steady_state_recursion(split, order, shifts, options);
}

// ---------------------------------------------------------------------------
// Truncation and diagnostics
// ---------------------------------------------------------------------------

Matrix assemble_truncated(const PTSeries& series, double alpha) {
    if (series.state_corrections.empty())
        throw std::invalid_argument("assemble_truncated: empty series");
    Matrix sum = series.state_corrections[0];
    double power = 1.0;
    for (std::size_t j = 1; j < series.state_corrections.size(); ++j) {
        power *= alpha;
        sum += power * series.state_corrections[j];
    }
    const Complex tr = sum.trace();
    if (std::abs(tr) <= kTraceTol * std::max(1.0, sum.norm()))
        throw NormalizationFailure("assemble_truncated: trace of the truncated sum vanishes");
    return sum / tr;
}

Matrix assemble_truncated(const PTSeries& series) {
    return assemble_truncated(series, series.alpha);
}

PositivityReport positivity_report(const Matrix& rho) {
    PositivityReport report;
    report.min_eig = min_eigenvalue_hermitian(rho);
    report.positive = report.min_eig >= -1e-12;
    return report;
}

}  // namespace lpt
