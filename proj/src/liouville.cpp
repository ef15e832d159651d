#include "lpt/liouville.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <numeric>

namespace lpt {

namespace {

constexpr double kTracePreservTol = 1e-10;
constexpr double kZeroModeTol = 1e-10;        // |lambda_0| <= tol * ||L||_F
constexpr double kBiorthTol = 1e-8;
constexpr double kEigResidualTol = 1e-8;      // a-posteriori diagonalizability check
constexpr double kDefectiveCond = 1e12;       // cond(V) above this -> Defective
constexpr double kUniquePivotRatio = 1e-12;   // bordered pivot ratio below this -> degenerate zero
constexpr double kSsPositivityTol = 1e-10;

const Complex kI{0.0, 1.0};

}  // namespace

Matrix embed(const Matrix& op, std::size_t site, const HilbertSpace& space) {
    const auto& dims = space.subsystem_dims;
    if (site >= dims.size()) throw std::invalid_argument("embed: site index out of range");
    if (op.rows() != dims[site] || op.cols() != dims[site])
        throw DimensionError("embed: operator does not match subsystem dimension");
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < dims.size(); ++k)
        out = kron(out, k == site ? op : Matrix(Matrix::Identity(dims[k], dims[k])));
    return out;
}

Matrix apply_superop(const SuperOp& sop, const Matrix& rho) {
    const Index d = sop.dim();
    if (rho.rows() != d || rho.cols() != d)
        throw DimensionError("apply: operator does not match superoperator dimension");
    return unvec(sop.matrix * vec(rho), d, d);
}

namespace {

// In-place accumulators for the generator building blocks. The identity
// factors touch only d*d^2 of the d^2*d^2 entries, so skipping the dense
// kron temporaries leaves assembly memory-bound on a single zero fill
// instead of a dozen full passes.

/// out += coeff * kron(conj(x), y)
void acc_kron_conj(Matrix& out, Complex coeff, const Matrix& x, const Matrix& y) {
    const Index d = x.rows();
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            const Complex w = coeff * std::conj(x(i, j));
            if (w != Complex{0.0, 0.0}) out.block(i * d, j * d, d, d) += w * y;
        }
}

/// out += coeff * kron(I, y): y repeated down the block diagonal
void acc_left_identity(Matrix& out, Complex coeff, const Matrix& y) {
    const Index d = y.rows();
    for (Index i = 0; i < d; ++i) out.block(i * d, i * d, d, d) += coeff * y;
}

/// out += coeff * kron(x^T, I): x(i,j) spread along the (j,i) block diagonal
void acc_right_identity_transposed(Matrix& out, Complex coeff, const Matrix& x) {
    const Index d = x.rows();
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            const Complex w = coeff * x(i, j);
            if (w != Complex{0.0, 0.0})
                for (Index k = 0; k < d; ++k) out(j * d + k, i * d + k) += w;
        }
}

/// out += rate * (conj(c) (x) c - 1/2 I (x) c^dag c - 1/2 (c^dag c)^T (x) I)
void acc_dissipator(Matrix& out, double rate, const Matrix& c) {
    const Matrix cdc = c.adjoint() * c;
    acc_kron_conj(out, rate, c, c);
    acc_left_identity(out, -0.5 * rate, cdc);
    acc_right_identity_transposed(out, -0.5 * rate, cdc);
}

/// out += -i (I (x) h - h^T (x) I)
void acc_commutator(Matrix& out, const Matrix& h) {
    acc_left_identity(out, -kI, h);
    acc_right_identity_transposed(out, kI, h);
}

}  // namespace

SuperOp dissipator_superop(const Matrix& c, const HilbertSpace& space) {
    const Index d = space.dim();
    if (c.rows() != d || c.cols() != d)
        throw DimensionError("dissipator_superop: collapse operator must be d x d");
    Matrix m = Matrix::Zero(d * d, d * d);
    acc_dissipator(m, 1.0, c);
    return SuperOp{std::move(m), space};
}

SuperOp commutator_superop(const Matrix& h, const HilbertSpace& space) {
    const Index d = space.dim();
    if (h.rows() != d || h.cols() != d)
        throw DimensionError("commutator_superop: operator must be d x d");
    Matrix m = Matrix::Zero(d * d, d * d);
    acc_commutator(m, h);
    return SuperOp{std::move(m), space};
}

SuperOp build_liouvillian(const LindbladSpec& spec, const HilbertSpace& space) {
    const Index d = space.dim();
    if (spec.hamiltonian.rows() != d || spec.hamiltonian.cols() != d)
        throw DimensionError("build_liouvillian: Hamiltonian must be d x d");
    if (!spec.hamiltonian.allFinite())
        throw std::invalid_argument("build_liouvillian: Hamiltonian has NaN/Inf entries");
    if (!is_hermitian(spec.hamiltonian))
        throw Error("build_liouvillian: Hamiltonian is not Hermitian to tolerance");

    Matrix m = Matrix::Zero(d * d, d * d);
    acc_commutator(m, hermitize(spec.hamiltonian));
    for (const auto& ch : spec.channels) {
        if (ch.rate < 0.0) throw std::invalid_argument("build_liouvillian: negative rate");
        if (ch.collapse_op.rows() != d || ch.collapse_op.cols() != d)
            throw DimensionError("build_liouvillian: collapse operator must be d x d");
        acc_dissipator(m, ch.rate, ch.collapse_op);
    }

    SuperOp sop{std::move(m), space};
    const Vector left_id = vec(Matrix(identity(d)));
    const double defect = (left_id.adjoint() * sop.matrix).cwiseAbs().maxCoeff();
    if (defect > kTracePreservTol * std::max(1.0, max_norm(sop.matrix)))
        throw Error("build_liouvillian: generator is not trace preserving");
    return sop;
}

std::vector<EigenPair> eig_biorthonormal(const SuperOp& sop) {
    const Index d = sop.dim();
    const Index big_d = sop.matrix.rows();
    const double scale = sop.matrix.norm();

    Eigen::ComplexEigenSolver<Matrix> es(sop.matrix, true);
    if (es.info() != Eigen::Success)
        throw Error("eig_biorthonormal: eigensolver failed to converge");

    const Matrix& v = es.eigenvectors();
    Eigen::PartialPivLU<Matrix> lu(v);
    Matrix v_inv = lu.inverse();

    const double cond1 = v.cwiseAbs().colwise().sum().maxCoeff() *
                         v_inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(cond1) || cond1 > kDefectiveCond)
        throw Defective("eig_biorthonormal: eigenvector matrix condition " +
                        std::to_string(cond1) + " exceeds threshold; spectrum treated as defective");

    // Residual check backs up the diagonalizability assumption a posteriori.
    const double biorth_resid = (v_inv * v - Matrix::Identity(big_d, big_d)).cwiseAbs().maxCoeff();
    if (biorth_resid > kBiorthTol)
        throw Defective("eig_biorthonormal: bi-orthonormality residual " +
                        std::to_string(biorth_resid));

    std::vector<Index> order(static_cast<std::size_t>(big_d));
    std::iota(order.begin(), order.end(), Index{0});
    const auto& vals = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (vals(a).real() != vals(b).real()) return vals(a).real() > vals(b).real();
        return std::abs(vals(a).imag()) < std::abs(vals(b).imag());
    });

    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(big_d));
    for (Index k : order) {
        EigenPair p;
        p.value = vals(k);
        p.right = unvec(v.col(k), d, d);
        p.left = unvec(Vector(v_inv.row(k).adjoint()), d, d);
        const double resid = (sop.matrix * v.col(k) - p.value * v.col(k)).norm();
        if (resid > kEigResidualTol * std::max(scale, 1e-300))
            throw Defective("eig_biorthonormal: eigenpair residual " + std::to_string(resid));
        pairs.push_back(std::move(p));
    }

    if (pairs[0].value.real() > kZeroModeTol * scale)
        throw Error("eig_biorthonormal: spectrum has Re(lambda) > 0 beyond tolerance");
    if (std::abs(pairs[0].value) > kZeroModeTol * scale)
        throw Error("eig_biorthonormal: no zero mode found (|lambda_0| = " +
                    std::to_string(std::abs(pairs[0].value)) + ")");

    // Return the steady-state branch Hermitized and unit trace, keeping
    // <sigma^0, rho^0> = 1.
    Matrix rho0 = hermitize(pairs[0].right);
    const Complex tr = rho0.trace();
    if (std::abs(tr) < 1e-14)
        throw Error("eig_biorthonormal: traceless zero mode cannot be normalized");
    rho0 /= tr;
    const Complex g = hs_inner(pairs[0].left, rho0);
    pairs[0].right = std::move(rho0);
    pairs[0].left /= std::conj(g);

    return pairs;
}

Matrix steady_state_exact(const SuperOp& sop) {
    const Index d = sop.dim();
    const Index big_d = sop.matrix.rows();

    // Bordered system [[L, nu*vec(I)], [nu*vec(I)^dag, 0]] [x; s] = [0; nu].
    // vec(I) is the exact left null vector of a trace-preserving generator, so
    // s vanishes and x solves L x = 0 with Tr x = 1. The bordered matrix is
    // nonsingular iff the zero eigenvalue is simple.
    const Vector id_vec = vec(Matrix(identity(d)));
    const double nu = std::max(sop.matrix.norm() / std::sqrt(double(big_d)), 1e-300);

    Matrix bordered(big_d + 1, big_d + 1);
    bordered.topLeftCorner(big_d, big_d) = sop.matrix;
    bordered.topRightCorner(big_d, 1) = nu * id_vec;
    bordered.bottomLeftCorner(1, big_d) = nu * id_vec.adjoint();
    bordered(big_d, big_d) = 0.0;

    Eigen::PartialPivLU<Eigen::Ref<Matrix>> lu(bordered);  // factors in place
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double pivot_ratio = pivots.maxCoeff() > 0.0 ? pivots.minCoeff() / pivots.maxCoeff() : 0.0;
    if (!(pivot_ratio >= kUniquePivotRatio))
        throw NonUniqueSteadyState("steady_state_exact: zero eigenvalue appears degenerate "
                                   "(bordered system is numerically singular)");

    Vector rhs = Vector::Zero(big_d + 1);
    rhs(big_d) = nu;
    const Vector sol = lu.solve(rhs);

    Matrix rho = hermitize(unvec(Vector(sol.head(big_d)), d, d));
    rho /= rho.trace().real();

    const double resid = (sop.matrix * vec(rho)).norm();
    if (resid > 1e-10 * std::max(sop.matrix.norm(), 1e-300))
        throw Error("steady_state_exact: residual ||L rho|| too large: " + std::to_string(resid));
    const double min_eig = min_eigenvalue_hermitian(rho);
    if (min_eig < -kSsPositivityTol)
        throw Error("steady_state_exact: steady state not PSD (min eig " +
                    std::to_string(min_eig) + ")");
    return rho;
}

Complex expectation(const Matrix& rho, const Matrix& op) {
    if (rho.rows() != op.rows() || rho.cols() != op.cols() || rho.rows() != rho.cols())
        throw DimensionError("expectation: dimension mismatch");
    return (op.transpose().cwiseProduct(rho)).sum();
}

}  // namespace lpt
