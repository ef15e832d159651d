#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "lpt/linalg.hpp"

using namespace lpt;

namespace {

Matrix random_complex(Index rows, Index cols, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

Matrix random_hermitian(Index n, unsigned seed) { return hermitize(random_complex(n, n, seed)); }

void check_penrose(const Matrix& a, const Pinv& p, double tol = 1e-10) {
    const Matrix& ap = p.matrix;
    const double scale = std::max(a.norm(), 1e-300);
    CHECK((a * ap * a - a).norm() <= tol * scale);
    CHECK((ap * a * ap - ap).norm() <= tol * std::max(ap.norm(), 1e-300));
    CHECK((a * ap - (a * ap).adjoint()).norm() <= tol * std::max((a * ap).norm(), 1.0));
    CHECK((ap * a - (ap * a).adjoint()).norm() <= tol * std::max((ap * a).norm(), 1.0));
}

Matrix diag2(Complex a, Complex b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_SUITE("linalg") {

    TEST_CASE("kron: identity and diagonal cases") {
        const Matrix i2 = Matrix::Identity(2, 2);
        CHECK((kron(i2, i2) - Matrix::Identity(4, 4)).norm() == doctest::Approx(0.0));

        const Matrix d = kron(diag2(1, 2), diag2(3, 4));
        Vector expected(4);
        expected << 3, 4, 6, 8;
        CHECK((d.diagonal() - expected).norm() == doctest::Approx(0.0));
        CHECK(d.cwiseAbs().sum() == doctest::Approx(d.diagonal().cwiseAbs().sum()));
    }

    TEST_CASE("kron: mixed-product property against direct multiplication") {
        for (unsigned seed = 0; seed < 5; ++seed) {
            const Matrix a = random_complex(3, 3, 10 + seed), b = random_complex(3, 3, 20 + seed);
            const Matrix c = random_complex(3, 3, 30 + seed), d = random_complex(3, 3, 40 + seed);
            const Matrix lhs = kron(a, b) * kron(c, d);
            const Matrix rhs = kron(Matrix(a * c), Matrix(b * d));
            CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }
    }

    TEST_CASE("vec stacks columns; unvec inverts it") {
        Matrix m(2, 2);
        m << 1, 2, 3, 4;
        const Vector v = vec(m);
        CHECK(v(0) == Complex(1));
        CHECK(v(1) == Complex(3));
        CHECK(v(2) == Complex(2));
        CHECK(v(3) == Complex(4));

        const Matrix r = random_complex(4, 4, 7);
        CHECK((unvec(vec(r), 4, 4) - r).norm() == 0.0);

        CHECK_THROWS_AS(unvec(v, 3, 2), DimensionError);
    }

    TEST_CASE("vec(x y z) = kron(z^T, x) vec(y)") {
        for (unsigned seed = 0; seed < 5; ++seed) {
            const Matrix x = random_complex(2, 2, 50 + seed), y = random_complex(2, 2, 60 + seed),
                         z = random_complex(2, 2, 70 + seed);
            const Vector lhs = vec(Matrix(x * y * z));
            const Vector rhs = kron(z.transpose(), x) * vec(y);
            CHECK((lhs - rhs).norm() <= 1e-13 * rhs.norm());
        }
    }

    TEST_CASE("pinv: diagonal singular case") {
        const Pinv p = pinv(diag2(2, 0));
        CHECK(p.rank == 1);
        CHECK((p.matrix - diag2(0.5, 0)).norm() <= 1e-15);
    }

    TEST_CASE("pinv matches the true inverse on an invertible matrix") {
        const Matrix a = random_complex(5, 5, 11);
        const Pinv p = pinv(a);
        CHECK(p.rank == 5);
        CHECK((p.matrix - a.inverse()).norm() <= 1e-10);
    }

    TEST_CASE("A A^+ is the orthogonal projector onto range(A)") {
        // random 6x6 of rank 3
        const Matrix a = random_complex(6, 3, 12) * random_complex(3, 6, 13);
        const Pinv p = pinv(a);
        CHECK(p.rank == 3);

        Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
        const Matrix u_r = svd.matrixU().leftCols(3);
        const Matrix projector = u_r * u_r.adjoint();
        const Matrix aap = a * p.matrix;
        CHECK((aap - projector).norm() <= 1e-10);
        CHECK((aap * aap - aap).norm() <= 1e-10);
    }

    TEST_CASE("Penrose conditions hold across shapes and ranks") {
        for (unsigned seed = 0; seed < 8; ++seed) {
            const Index m = 3 + seed % 4, n = 3 + (seed * 7) % 5;
            Matrix a = random_complex(m, n, 100 + seed);
            if (seed % 2 == 1) {
                const Index r = std::min(m, n) / 2 + 1;
                a = random_complex(m, r, 200 + seed) * random_complex(r, n, 300 + seed);
            }
            check_penrose(a, pinv(a));
        }
    }

    TEST_CASE("pinv rejects bad tolerances and non-finite input") {
        CHECK_THROWS_AS(pinv(Matrix::Identity(2, 2), 0.0), std::invalid_argument);
        CHECK_THROWS_AS(pinv(Matrix::Identity(2, 2), 1.5), std::invalid_argument);
        Matrix bad = Matrix::Identity(2, 2);
        bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(pinv(bad), std::invalid_argument);
    }

    TEST_CASE("cholesky: identity and diagonal") {
        CHECK((cholesky_lower(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);
        CHECK((cholesky_lower(diag2(4, 9)) - diag2(2, 3)).norm() == 0.0);
    }

    TEST_CASE("cholesky reconstructs and refactors uniquely") {
        const Matrix b = random_complex(8, 8, 42);
        const Matrix a = b * b.adjoint() + 1e-3 * Matrix::Identity(8, 8);
        const Matrix l = cholesky_lower(a);
        CHECK((l * l.adjoint() - a).norm() <= 1e-12 * a.norm());
        for (Index j = 0; j < 8; ++j) {
            CHECK(l(j, j).imag() == 0.0);
            CHECK(l(j, j).real() > 0.0);
            for (Index i = 0; i < j; ++i) CHECK(std::abs(l(i, j)) == 0.0);
        }
        // unique lower factor with positive diagonal
        const Matrix l2 = cholesky_lower(Matrix(l * l.adjoint()));
        CHECK((l2 - l).norm() <= 1e-10 * l.norm());
    }

    TEST_CASE("cholesky rejects indefinite and singular input") {
        CHECK_THROWS_AS(cholesky_lower(diag2(1, -1)), NotPositiveDefinite);
        CHECK_THROWS_AS(cholesky_lower(diag2(1, 0)), NotPositiveDefinite);
        CHECK_THROWS_AS(cholesky_lower(random_complex(3, 3, 5)), std::invalid_argument);
    }

    TEST_CASE("min_eigenvalue_hermitian") {
        CHECK(min_eigenvalue_hermitian(Matrix::Identity(4, 4)) == doctest::Approx(1.0));
        CHECK(min_eigenvalue_hermitian(diag2(0.3, -0.1)) == doctest::Approx(-0.1));

        const Matrix h = random_hermitian(10, 99);
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        CHECK(std::abs(min_eigenvalue_hermitian(h) - es.eigenvalues().minCoeff()) <= 1e-12);
    }

    TEST_CASE("trace_norm equals the sum of singular values") {
        const Matrix a = random_complex(5, 5, 8);
        Eigen::BDCSVD<Matrix> svd(a);
        CHECK(trace_norm(a) == doctest::Approx(svd.singularValues().sum()));
        CHECK(trace_norm(Matrix::Identity(3, 3)) == doctest::Approx(3.0));
    }

    TEST_CASE("hs_inner is Tr(x^dag y)") {
        const Matrix x = random_complex(4, 4, 1), y = random_complex(4, 4, 2);
        const Complex direct = (x.adjoint() * y).trace();
        CHECK(std::abs(hs_inner(x, y) - direct) <= 1e-13);
    }

}  // TEST_SUITE
