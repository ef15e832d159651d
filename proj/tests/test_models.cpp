#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <numbers>
#include <random>

#include "lpt/models.hpp"
#include "lpt/oracle.hpp"

using namespace lpt;

namespace {

/// Reduced density matrix of one spin site (dims all 2).
Matrix reduced_single_site(const Matrix& rho, int site, int n_sites) {
    const Index d = rho.rows();
    Matrix red = Matrix::Zero(2, 2);
    const Index stride = Index(1) << (n_sites - 1 - site);
    for (Index r = 0; r < d; ++r) {
        const Index r_site = (r / stride) % 2;
        const Index r_rest = r - r_site * stride;
        for (Index c_site = 0; c_site < 2; ++c_site) {
            const Index c = r_rest + c_site * stride;
            red(r_site, c_site) += rho(r, c);
        }
    }
    return red;
}

QubitRingSpec benchmark_qubit_spec(double dw, int cutoff = 3) {
    return QubitRingSpec{cutoff, dw, 1.0, 10.0, 0.5, 0.05, 0.05};
}

}  // namespace

TEST_SUITE("models") {

    TEST_CASE("spin ring: dimensional bookkeeping") {
        const PTSplit split = spin_ring_split(SpinRingSpec{4, 0.1, 0.8, 0.4, 1.0});
        CHECK(split.l0.dim() == 16);
        CHECK(split.l0.matrix.rows() == 256);
        CHECK(split.coupling == doctest::Approx(0.4));
    }

    TEST_CASE("spin ring: split sums to the directly built generator") {
        const SpinRingSpec spec{3, -0.4, 0.8, 0.37, 1.0};
        const PTSplit split = spin_ring_split(spec);
        const SuperOp direct = spin_ring_direct_liouvillian(spec);
        const Matrix recombined = split.l0.matrix + spec.t_coupling * split.l1.matrix;
        CHECK(max_norm(recombined - direct.matrix) <=
              1e-13 * std::max(1.0, max_norm(direct.matrix)));
    }

    TEST_CASE("spin ring at t = 0: steady state is a tensor power") {
        const SpinRingSpec spec{4, 0.5, 0.8, 0.0, 1.0};
        const Matrix full = steady_state_exact(spin_ring_direct_liouvillian(spec));

        HilbertSpace single{{2}};
        LindbladSpec tls;
        tls.hamiltonian = 0.5 * sigma_plus() * sigma_minus() + 0.8 * (sigma_plus() + sigma_minus());
        tls.channels.push_back({sigma_minus(), 1.0});
        const Matrix one = steady_state_exact(build_liouvillian(tls, single));

        const Matrix product = kron(kron(one, one), kron(one, one));
        CHECK((full - product).norm() <= 1e-10);
    }

    TEST_CASE("spin ring: translation symmetry of the exact steady state") {
        const SpinRingSpec spec{4, 0.7, 0.8, 0.4, 1.0};
        const Matrix rho = steady_state_exact(spin_ring_direct_liouvillian(spec));
        const Matrix site0 = reduced_single_site(rho, 0, 4);
        for (int site = 1; site < 4; ++site)
            CHECK((reduced_single_site(rho, site, 4) - site0).norm() <= 1e-10);
        CHECK(std::abs(site0.trace() - Complex(1.0)) <= 1e-12);
    }

    TEST_CASE("displaced amplitudes: symmetric and asymptotic limits") {
        QubitRingSpec spec = benchmark_qubit_spec(0.3);
        spec.kappa = 0.0;
        const DisplacedFrame frame = displaced_amplitudes(spec);
        const double expected =
            (1.0 / std::sqrt(3.0)) / std::sqrt(0.3 * 0.3 + 0.05 * 0.05 / 4.0);
        for (const Complex& amp : frame.mode_amplitudes)
            CHECK(std::abs(amp) == doctest::Approx(expected).epsilon(1e-12));

        QubitRingSpec far = benchmark_qubit_spec(1e8);
        const DisplacedFrame far_frame = displaced_amplitudes(far);
        for (const Complex& amp : far_frame.mode_amplitudes) CHECK(std::abs(amp) <= 1e-7);
    }

    TEST_CASE("displaced amplitudes: benchmark values at zero detuning") {
        const DisplacedFrame frame = displaced_amplitudes(benchmark_qubit_spec(0.0));
        CHECK(std::abs(frame.mode_amplitudes[0]) == doctest::Approx(0.028867).epsilon(1e-3));
        CHECK(std::abs(frame.mode_amplitudes[1]) == doctest::Approx(0.057735).epsilon(1e-3));
        CHECK(std::abs(frame.mode_amplitudes[2]) == doctest::Approx(0.057735).epsilon(1e-3));
    }

    TEST_CASE("site amplitudes match the 3x3 linear response solve") {
        for (double dw : {-2.0, 0.0, 0.7}) {
            const QubitRingSpec spec = benchmark_qubit_spec(dw);
            const DisplacedFrame frame = displaced_amplitudes(spec);

            // [(dw - i ga/2) I + kappa C] alpha = -eps e_1 with C the ring
            // adjacency matrix; an independent route to the site amplitudes.
            Matrix m = Matrix::Zero(3, 3);
            const Complex diag{spec.delta_omega, -0.5 * spec.gamma_a};
            for (int n = 0; n < 3; ++n) {
                m(n, n) = diag;
                m(n, (n + 1) % 3) += spec.kappa;
                m(n, (n + 2) % 3) += spec.kappa;
            }
            Vector rhs = Vector::Zero(3);
            rhs(0) = -spec.epsilon;
            const Vector alpha = m.partialPivLu().solve(rhs);
            for (int n = 0; n < 3; ++n)
                CHECK(std::abs(alpha(n) - frame.site_amplitudes[n]) <= 1e-10);
        }
    }

    TEST_CASE("qubit ring: split sums to the directly built generator") {
        const QubitRingSpec spec = benchmark_qubit_spec(0.4, 2);
        const QubitRingSystem sys = qubit_ring_split(spec);
        const SuperOp direct = qubit_ring_direct_liouvillian(spec);
        const Matrix recombined = sys.split.l0.matrix + spec.g * sys.split.l1.matrix;
        CHECK(max_norm(recombined - direct.matrix) <=
              1e-13 * std::max(1.0, max_norm(direct.matrix)));
    }

    TEST_CASE("qubit ring: L0 steady state has displaced modes in vacuum") {
        const QubitRingSpec spec = benchmark_qubit_spec(0.6, 3);
        const QubitRingSystem sys = qubit_ring_split(spec);
        const Matrix rho0 = steady_state_exact(sys.split.l0);
        for (int mu = 0; mu < 3; ++mu) {
            const Matrix a_mu = embed(destroy(spec.fock_cutoff), 1 + mu, sys.space);
            const Complex n_mu = expectation(rho0, Matrix(a_mu.adjoint() * a_mu));
            CHECK(std::abs(n_mu) <= 1e-12);
        }
    }

    TEST_CASE("qubit ring at g = 0: decoupled limit is vacuum + ground qubit") {
        QubitRingSpec spec = benchmark_qubit_spec(0.5, 2);
        spec.g = 0.0;
        const QubitRingSystem sys = qubit_ring_split(spec);
        CHECK(std::abs(sys.frame.eps_eff) == 0.0);
        const Matrix rho0 = steady_state_exact(sys.split.l0);
        const Complex pop =
            expectation(rho0, embed(Matrix(sigma_plus() * sigma_minus()), 0, sys.space));
        CHECK(std::abs(pop) <= 1e-12);
    }

    TEST_CASE("lab frame: coherent-state identities and g = 0 exactness") {
        const QubitRingSpec spec = benchmark_qubit_spec(-0.8, 2);
        const QubitRingSystem sys = qubit_ring_split(spec);

        // vacuum displaced state
        Matrix vacuum = Matrix::Zero(sys.space.dim(), sys.space.dim());
        vacuum(0, 0) = 1.0;
        const LabFrameObservables vac_obs = lab_frame_observables(vacuum, sys.frame, 2);
        CHECK(std::abs(vac_obs.a1 - sys.frame.site_amplitudes[0]) <= 1e-14);
        CHECK(vac_obs.n1 == doctest::Approx(std::norm(sys.frame.site_amplitudes[0])));

        // with g = 0 the exact displaced steady state reproduces the linear
        // response exactly, at every site
        QubitRingSpec decoupled = spec;
        decoupled.g = 0.0;
        const QubitRingSystem dec = qubit_ring_split(decoupled);
        const Matrix rho = steady_state_exact(dec.split.l0);
        const LabFrameObservables obs = lab_frame_observables(rho, dec.frame, 2);
        CHECK(std::abs(obs.a1 - dec.frame.site_amplitudes[0]) <= 1e-10);
        CHECK(obs.n1 == doctest::Approx(std::norm(dec.frame.site_amplitudes[0])).epsilon(1e-8));

        const Complex phase = std::exp(Complex{0.0, -2.0 * std::numbers::pi / 3.0});
        for (int n = 1; n <= 3; ++n) {
            Matrix a_n = Matrix::Zero(dec.space.dim(), dec.space.dim());
            for (int mu = 0; mu < 3; ++mu)
                a_n += std::pow(phase, mu * n) * embed(destroy(2), 1 + mu, dec.space);
            a_n /= std::sqrt(3.0);
            const Complex lab_a_n = expectation(rho, a_n) + dec.frame.site_amplitudes[n - 1];
            CHECK(std::abs(lab_a_n - dec.frame.site_amplitudes[n - 1]) <= 1e-10);
        }
    }

    TEST_CASE("g = 0 ring response has resonances at -2 kappa and +kappa") {
        // at g = 0 the lab-frame <a_1> equals the closed-form site amplitude,
        // so the wide diagnostic sweep reduces to the linear response formula
        std::vector<double> grid, response;
        for (double dw = -25.0; dw <= 15.0; dw += 0.05) {
            QubitRingSpec spec = benchmark_qubit_spec(dw);
            spec.g = 0.0;
            grid.push_back(dw);
            response.push_back(std::abs(displaced_amplitudes(spec).site_amplitudes[0]));
        }
        std::vector<std::size_t> maxima;
        for (std::size_t i = 1; i + 1 < response.size(); ++i)
            if (response[i] > response[i - 1] && response[i] > response[i + 1]) maxima.push_back(i);
        REQUIRE(maxima.size() == 2);
        CHECK(std::abs(grid[maxima[0]] + 20.0) <= 0.2);  // delta_omega = -2 kappa
        CHECK(std::abs(grid[maxima[1]] - 10.0) <= 0.2);  // delta_omega = +kappa
    }

    TEST_CASE("qubit ring: subsystem blocks Kronecker-sum to L0") {
        const QubitRingSpec spec = benchmark_qubit_spec(0.2, 2);
        const QubitRingSystem sys = qubit_ring_split(spec);
        KronLiouvilleSolver solver(qubit_ring_subsystem_liouvillians(spec), {2, 2, 2, 2});
        REQUIRE(solver.liouville_dim() == sys.split.l0.matrix.rows());

        std::mt19937 gen(11);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int rep = 0; rep < 3; ++rep) {
            Vector x(solver.liouville_dim());
            for (Index i = 0; i < x.size(); ++i) x(i) = Complex(dist(gen), dist(gen));
            const Vector dense = sys.split.l0.matrix * x;
            const Vector structured = solver.apply_l0(x);
            CHECK((dense - structured).norm() <= 1e-10 * std::max(1.0, dense.norm()));
        }
    }

}  // TEST_SUITE
