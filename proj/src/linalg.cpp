#include "lpt/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace lpt {

double trace_norm(const Matrix& a) {
    Eigen::BDCSVD<Matrix> svd(a);
    if (svd.info() != Eigen::Success) throw SvdFailure("trace_norm: SVD did not converge");
    return svd.singularValues().sum();
}

Pinv pinv(const Matrix& a, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw std::invalid_argument("pinv: rel_tol must lie in (0, 1)");
    if (!a.allFinite()) throw std::invalid_argument("pinv: input has NaN/Inf entries");

    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw SvdFailure("pinv: SVD did not converge");

    const RealVector& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double cutoff = rel_tol * sigma_max;

    Index rank = 0;
    RealVector inv_sv = RealVector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) {
            inv_sv(i) = 1.0 / sv(i);
            ++rank;
        }
    }

    Pinv result;
    result.matrix = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
    result.rank = rank;
    result.singular_tol = rel_tol;
    return result;
}

Matrix cholesky_lower(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("cholesky_lower: matrix must be square");
    if (!a.allFinite()) throw std::invalid_argument("cholesky_lower: input has NaN/Inf entries");
    if (!is_hermitian(a))
        throw std::invalid_argument("cholesky_lower: input is not Hermitian to tolerance");

    const Matrix h = hermitize(a);
    const Index n = h.rows();
    Matrix l = Matrix::Zero(n, n);

    for (Index j = 0; j < n; ++j) {
        double pivot = h(j, j).real();
        for (Index k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
        if (!(pivot > 0.0))
            throw NotPositiveDefinite("cholesky_lower: non-positive pivot " +
                                      std::to_string(pivot) + " at index " + std::to_string(j));
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (Index i = j + 1; i < n; ++i) {
            Complex s = h(i, j);
            for (Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / d;
        }
    }
    return l;
}

double min_eigenvalue_hermitian(const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionError("min_eigenvalue_hermitian: matrix must be square");
    if (!is_hermitian(a))
        throw std::invalid_argument("min_eigenvalue_hermitian: input is not Hermitian to tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw Error("min_eigenvalue_hermitian: eigensolver failed to converge");
    return es.eigenvalues()(0);
}

}  // namespace lpt
