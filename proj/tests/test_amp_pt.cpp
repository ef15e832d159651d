#include <doctest.h>

#include <random>

#include "lpt/amp_pt.hpp"
#include "lpt/dm_pt.hpp"
#include "lpt/models.hpp"
#include "lpt/oracle.hpp"

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

Matrix random_lower_real_diag(Index d, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m = Matrix::Zero(d, d);
    for (Index j = 0; j < d; ++j) {
        m(j, j) = dist(gen) + 2.0;  // keep well away from singular
        for (Index i = j + 1; i < d; ++i) m(i, j) = Complex(dist(gen), dist(gen));
    }
    return m;
}

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_SUITE("amp_pt") {

    TEST_CASE("seed_amplitude: diagonal case and pure-state regularization") {
        const Matrix seed = seed_amplitude(diag2(0.75, 0.25), 0.0);
        CHECK((seed - diag2(std::sqrt(0.75), std::sqrt(0.25))).norm() <= 1e-15);

        const Matrix pure = diag2(1.0, 0.0);
        CHECK_THROWS_AS(seed_amplitude(pure, 0.0), NotPositiveDefinite);

        const Matrix reg = seed_amplitude(pure, 1e-9);
        CHECK(max_norm(reg * reg.adjoint() - pure) <= 2e-9);
    }

    TEST_CASE("build_z0_system: 1x1 and identity seeds") {
        Matrix one(1, 1);
        one(0, 0) = std::sqrt(0.7);
        const Z0System sys1 = build_z0_system(one);
        CHECK(sys1.real_linear_matrix(0, 0) == doctest::Approx(2.0 * std::sqrt(0.7)));

        // zeta0 = I: solving Z0 X = H gives X_ii = H_ii/2, X_{i>j} = H_ij.
        const Matrix id = Matrix::Identity(3, 3);
        const Z0System sys = build_z0_system(id);
        const Matrix h = hermitize(random_complex(3, 3, 5));
        const Matrix x = z0_solve(sys, h);
        for (Index j = 0; j < 3; ++j) {
            CHECK(std::abs(x(j, j) - h(j, j) / 2.0) <= 1e-12);
            for (Index i = j + 1; i < 3; ++i) CHECK(std::abs(x(i, j) - h(i, j)) <= 1e-12);
        }
        CHECK((id * x.adjoint() + x * id.adjoint() - h).norm() <= 1e-12);
    }

    TEST_CASE("z0_solve residual on a random full-rank seed") {
        const Matrix zeta0 = random_lower_real_diag(4, 21);
        const Z0System sys = build_z0_system(zeta0);
        CHECK(sys.condition < 1e6);
        for (unsigned seed = 0; seed < 4; ++seed) {
            const Matrix h = hermitize(random_complex(4, 4, 400 + seed));
            const Matrix x = z0_solve(sys, h);
            CHECK((zeta0 * x.adjoint() + x * zeta0.adjoint() - h).norm() <= 1e-10 * h.norm());
            // solution respects the parametrization
            for (Index j = 0; j < 4; ++j) {
                CHECK(x(j, j).imag() == 0.0);
                for (Index i = 0; i < j; ++i) CHECK(std::abs(x(i, j)) == 0.0);
            }
        }
    }

    TEST_CASE("triangular solve equals the dense LU route") {
        const Matrix zeta0 = random_lower_real_diag(5, 33);
        const Z0System sys = build_z0_system(zeta0);
        for (unsigned seed = 0; seed < 4; ++seed) {
            const Matrix h = hermitize(random_complex(5, 5, 800 + seed));
            const Matrix lu = z0_solve(sys, h);
            const Matrix tri = z0_solve_triangular(zeta0, h);
            CHECK((lu - tri).norm() <= 1e-10 * std::max(1.0, lu.norm()));
        }
    }

    TEST_CASE("singular Z0 is reported on both routes") {
        Matrix zeta0 = random_lower_real_diag(3, 7);
        zeta0(1, 1) = 0.0;
        const Matrix h = hermitize(random_complex(3, 3, 9));
        const Z0System sys = build_z0_system(zeta0);
        CHECK_THROWS_AS(z0_solve(sys, h), SingularZ0);
        CHECK_THROWS_AS(z0_solve_triangular(zeta0, h), SingularZ0);
    }

    TEST_CASE("null perturbation: all amplitude corrections vanish") {
        std::vector<Matrix> rho_corr = {diag2(0.6, 0.4), Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
        const AmplitudeSeries series = amp_pt_corrections(rho_corr, 0.0);
        CHECK(series.corrections[1].norm() == 0.0);
        CHECK(series.corrections[2].norm() == 0.0);
    }

    TEST_CASE("diagonal toy: zeta^(1)_ii = rho^(1)_ii / (2 zeta^(0)_ii)") {
        std::vector<Matrix> rho_corr = {diag2(0.75, 0.25), diag2(-0.25, 0.25)};
        const AmplitudeSeries series = amp_pt_corrections(rho_corr, 0.0);
        CHECK(series.corrections[1](0, 0).real() ==
              doctest::Approx(-0.25 / (2.0 * std::sqrt(0.75))));
        CHECK(series.corrections[1](1, 1).real() ==
              doctest::Approx(0.25 / (2.0 * std::sqrt(0.25))));
        CHECK(series.corrections[1](0, 0).real() == doctest::Approx(-0.14433756729740643));
        CHECK(series.corrections[1](1, 1).real() == doctest::Approx(0.25));
    }

    TEST_CASE("reconstruct_density: seed round trip and PSD guarantee") {
        const double c = 1e-6;
        const Matrix rho0 = diag2(0.9, 0.1);
        std::vector<Matrix> rho_corr = {rho0};
        const AmplitudeSeries series = amp_pt_corrections(rho_corr, c);
        const Matrix rec = reconstruct_density(series, 0.3);
        const Matrix expected = (rho0 + c * Matrix::Identity(2, 2)) / (1.0 + 2.0 * c);
        CHECK((rec - expected).norm() <= 1e-14);
        CHECK(std::abs(rec.trace() - Complex(1.0)) <= 1e-14);
        CHECK(min_eigenvalue_hermitian(rec) >= -1e-14);
    }

    TEST_CASE("amplitude PT tracks density PT through order M on the spin ring") {
        const PTSplit split = spin_ring_split(SpinRingSpec{2, 0.5, 0.8, 0.0, 1.0});
        const int order = 2;
        const PTSeries dm = pt_steady_state(split, order);
        const AmplitudeSeries amp =
            amp_pt_corrections(dm.state_corrections, default_reg_c(dm.state_corrections[0]));
        CHECK(amp.reg_c == 0.0);  // the driven product state is safely mixed

        std::vector<double> alphas, diffs;
        for (double t : {0.02, 0.04, 0.08}) {
            alphas.push_back(t);
            diffs.push_back(trace_norm(reconstruct_density(amp, t) -
                                       assemble_truncated(dm, t)));
        }
        CHECK(fit_loglog_slope(alphas, diffs) >= order + 1 - 0.3);

        // every reconstruction is PSD to roundoff
        for (double t : {0.02, 0.04, 0.08})
            CHECK(min_eigenvalue_hermitian(reconstruct_density(amp, t)) >= -1e-14);
    }

    TEST_CASE("RHS Hermiticity guard trips on corrupted input") {
        std::vector<Matrix> rho_corr = {diag2(0.75, 0.25), random_complex(2, 2, 17)};
        CHECK_THROWS_AS(amp_pt_corrections(rho_corr, 0.0), Error);
    }

    TEST_CASE("c-stability scan flags the no-power-series case") {
        // Zero-temperature TLS with D[sigma^+] treated as the perturbation:
        // rho^(0) is pure, the amplitude series needs half-integer powers and
        // no correction matrix can stabilize it.
        HilbertSpace space{{2}};
        LindbladSpec l0_spec;
        l0_spec.hamiltonian = Matrix::Zero(2, 2);
        l0_spec.channels.push_back({sigma_minus(), 1.0});
        const SuperOp l0 = build_liouvillian(l0_spec, space);

        LindbladSpec l1_spec;
        l1_spec.hamiltonian = Matrix::Zero(2, 2);
        l1_spec.channels.push_back({sigma_plus(), 1.0});
        const SuperOp l1 = build_liouvillian(l1_spec, space);

        const PTSplit split{l0, l1, 0.1};
        const PTSeries dm = pt_steady_state(split, 2);

        // c = 0 is singular outright ...
        CHECK_THROWS_AS(amp_pt_corrections(dm.state_corrections, 0.0), NotPositiveDefinite);

        // ... the regularized corrections diverge as c -> 0 (the half-integer
        // signature: zeta^(1) ~ c^(-1/2)) ...
        const AmplitudeSeries amp8 = amp_pt_corrections(dm.state_corrections, 1e-8);
        const AmplitudeSeries amp10 = amp_pt_corrections(dm.state_corrections, 1e-10);
        CHECK(amp10.corrections[1].norm() / amp8.corrections[1].norm() > 5.0);

        // ... and the reconstruction is useless against the exact steady
        // state while density PT is accurate. (The normalized state itself
        // can be spuriously c-stable here, collapsing onto the excited state
        // for every c; the coefficient divergence above is the reliable
        // signature.)
        const double cs[] = {1e-8, 1e-9, 1e-10};
        const Matrix exact = steady_state_exact(total_liouvillian(split, 0.1));
        CHECK(trace_norm(reconstruct_density(amp8, 0.1) - exact) > 0.5);
        CHECK(trace_norm(assemble_truncated(dm, 0.1) - exact) < 1e-10);

        // Contrast: a healthy mixed seed is c-stable.
        const PTSplit ring = spin_ring_split(SpinRingSpec{2, 0.5, 0.8, 0.0, 1.0});
        const PTSeries healthy = pt_steady_state(ring, 2);
        const double healthy_spread = amp_c_stability(healthy.state_corrections, cs, 0.1);
        CHECK(healthy_spread < 1e-6);
    }

    TEST_CASE("c-stability of the qubit-ring reconstruction (desk scale)") {
        const QubitRingSpec spec{2, 0.4, 1.0, 10.0, 0.5, 0.05, 0.05};
        const QubitRingSystem sys = qubit_ring_split(spec);
        const PTSeries dm = pt_steady_state(sys.split, 2);
        const double cs[] = {1e-8, 1e-9, 1e-10};
        CHECK(amp_c_stability(dm.state_corrections, cs, spec.g) < 1e-6);
    }

    TEST_CASE("series invariants: lower triangular with real diagonals") {
        const PTSplit split = spin_ring_split(SpinRingSpec{2, 0.3, 0.7, 0.0, 1.0});
        const PTSeries dm = pt_steady_state(split, 3);
        const AmplitudeSeries amp = amp_pt_corrections(dm.state_corrections, 0.0);
        for (const Matrix& zeta : amp.corrections) {
            for (Index j = 0; j < zeta.cols(); ++j) {
                CHECK(std::abs(zeta(j, j).imag()) <= 1e-12);
                for (Index i = 0; i < j; ++i) CHECK(std::abs(zeta(i, j)) == 0.0);
            }
        }
        for (Index j = 0; j < 4; ++j) CHECK(amp.corrections[0](j, j).real() >= 0.0);
    }

}  // TEST_SUITE
