#pragma once

#include <Eigen/Dense>
#include <complex>

#include "lpt/errors.hpp"

namespace lpt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative singular-value cutoff used by pinv when none is given. Relative
/// (not absolute) so that the one exact null direction of a trace-preserving
/// generator separates from genuinely small decay rates across energy scales.
inline constexpr double kDefaultPinvRelTol = 1e-12;

/// Inputs with ||a - a^dag||_max <= kHermTol * ||a||_max count as Hermitian
/// and are symmetrized before factorization.
inline constexpr double kHermTol = 1e-10;

// ---------------------------------------------------------------------------
// Kronecker product and column-stacking vectorization
// ---------------------------------------------------------------------------

/// kron(a,b)[(i*rb+k), (j*cb+l)] = a(i,j) * b(k,l)
template <typename DerivedA, typename DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    Matrix out(ra * rb, ca * cb);
    for (Index i = 0; i < ra; ++i)
        for (Index j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b.derived();
    return out;
}

/// Stacks columns top to bottom.
template <typename Derived>
Vector vec(const Eigen::MatrixBase<Derived>& a) {
    return a.derived().reshaped();
}

/// Inverse of vec. Throws DimensionError if sizes do not match.
inline Matrix unvec(const Vector& v, Index rows, Index cols) {
    if (v.size() != rows * cols)
        throw DimensionError("unvec: vector of size " + std::to_string(v.size()) +
                             " cannot fill " + std::to_string(rows) + "x" + std::to_string(cols));
    return v.reshaped(rows, cols);
}

// ---------------------------------------------------------------------------
// Small helpers shared across the library
// ---------------------------------------------------------------------------

template <typename Derived>
double max_norm(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double rel_tol = kHermTol) {
    if (a.rows() != a.cols()) return false;
    const double scale = max_norm(a);
    return max_norm(a - a.adjoint()) <= rel_tol * std::max(scale, 1e-300);
}

template <typename Derived>
Matrix hermitize(const Eigen::MatrixBase<Derived>& a) {
    return 0.5 * (a + a.adjoint());
}

/// Hilbert-Schmidt inner product <x,y> = Tr(x^dag y).
inline Complex hs_inner(const Matrix& x, const Matrix& y) {
    return (x.conjugate().cwiseProduct(y)).sum();
}

/// Sum of singular values.
double trace_norm(const Matrix& a);

// ---------------------------------------------------------------------------
// Moore-Penrose pseudoinverse
// ---------------------------------------------------------------------------

/// SVD-based pseudoinverse V D^+ U^dag of a source matrix A = U D V^dag.
struct Pinv {
    Matrix matrix;       // the pseudoinverse itself
    Index rank = 0;      // number of singular values kept
    double singular_tol; // relative cutoff: kept sigma > singular_tol * sigma_max
};

/// Inverts singular values above rel_tol * sigma_max, zeroes the rest.
/// The result satisfies all four Penrose conditions to numerical tolerance.
Pinv pinv(const Matrix& a, double rel_tol = kDefaultPinvRelTol);

// ---------------------------------------------------------------------------
// Cholesky factorization
// ---------------------------------------------------------------------------

/// Lower-triangular L with real positive diagonal such that L L^dag = a.
/// Input must be Hermitian to tolerance (it is symmetrized) and positive
/// definite; a non-positive pivot throws NotPositiveDefinite.
Matrix cholesky_lower(const Matrix& a);

/// Smallest eigenvalue of (a + a^dag)/2. Input must be Hermitian to tolerance.
double min_eigenvalue_hermitian(const Matrix& a);

}  // namespace lpt
