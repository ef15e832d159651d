#include "lpt/models.hpp"

#include <cmath>
#include <numbers>

namespace lpt {

namespace {

const Complex kI{0.0, 1.0};

void validate_spin_ring(const SpinRingSpec& spec) {
    if (spec.n_sites < 2) throw std::invalid_argument("spin ring: need at least 2 sites");
    if (!(spec.gamma > 0.0))
        throw std::invalid_argument("spin ring: gamma must be > 0 for a unique steady state");
}

void validate_qubit_ring(const QubitRingSpec& spec) {
    if (spec.fock_cutoff < 2) throw std::invalid_argument("qubit ring: fock_cutoff must be >= 2");
    if (!(spec.gamma_a > 0.0) || !(spec.gamma_q > 0.0))
        throw std::invalid_argument("qubit ring: gamma_a and gamma_q must be > 0");
}

Matrix spin_ring_onsite_hamiltonian(const SpinRingSpec& spec, const HilbertSpace& space) {
    const Index d = space.dim();
    Matrix h = Matrix::Zero(d, d);
    const Matrix n_op = sigma_plus() * sigma_minus();
    const Matrix drive = sigma_plus() + sigma_minus();
    for (int n = 0; n < spec.n_sites; ++n)
        h += spec.delta_omega * embed(n_op, n, space) + spec.epsilon * embed(drive, n, space);
    return h;
}

Matrix spin_ring_hopping_hamiltonian(int n_sites, const HilbertSpace& space) {
    const Index d = space.dim();
    Matrix h = Matrix::Zero(d, d);
    for (int n = 0; n < n_sites; ++n) {
        const int m = (n + 1) % n_sites;
        const Matrix hop =
            embed(sigma_plus(), n, space) * embed(sigma_minus(), m, space);
        h += hop + hop.adjoint();
    }
    return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Spin ring
// ---------------------------------------------------------------------------

PTSplit spin_ring_split(const SpinRingSpec& spec) {
    validate_spin_ring(spec);
    HilbertSpace space(std::vector<Index>(static_cast<std::size_t>(spec.n_sites), Index{2}));

    LindbladSpec l0_spec;
    l0_spec.hamiltonian = spin_ring_onsite_hamiltonian(spec, space);
    for (int n = 0; n < spec.n_sites; ++n)
        l0_spec.channels.push_back({embed(sigma_minus(), n, space), spec.gamma});
    SuperOp l0 = build_liouvillian(l0_spec, space);

    SuperOp l1 = commutator_superop(spin_ring_hopping_hamiltonian(spec.n_sites, space), space);
    return PTSplit{std::move(l0), std::move(l1), spec.t_coupling};
}

SuperOp spin_ring_direct_liouvillian(const SpinRingSpec& spec) {
    validate_spin_ring(spec);
    HilbertSpace space(std::vector<Index>(static_cast<std::size_t>(spec.n_sites), Index{2}));
    LindbladSpec full;
    full.hamiltonian = spin_ring_onsite_hamiltonian(spec, space) +
                       spec.t_coupling * spin_ring_hopping_hamiltonian(spec.n_sites, space);
    for (int n = 0; n < spec.n_sites; ++n)
        full.channels.push_back({embed(sigma_minus(), n, space), spec.gamma});
    return build_liouvillian(full, space);
}

SpinRingObservables spin_ring_observables(int n_sites) {
    HilbertSpace space(std::vector<Index>(static_cast<std::size_t>(n_sites), Index{2}));
    return SpinRingObservables{embed(sigma_minus(), 0, space),
                               embed(sigma_plus() * sigma_minus(), 0, space)};
}

std::vector<EigenPair> uncoupled_spin_eigenpairs(const SpinRingSpec& spec) {
    validate_spin_ring(spec);
    HilbertSpace single{{2}};
    LindbladSpec tls;
    tls.hamiltonian = spec.delta_omega * sigma_plus() * sigma_minus() +
                      spec.epsilon * (sigma_plus() + sigma_minus());
    tls.channels.push_back({sigma_minus(), spec.gamma});
    const auto singles = eig_biorthonormal(build_liouvillian(tls, single));

    std::vector<EigenPair> pairs = {EigenPair{0.0, Matrix::Identity(1, 1), Matrix::Identity(1, 1)}};
    for (int site = 0; site < spec.n_sites; ++site) {
        std::vector<EigenPair> next;
        next.reserve(pairs.size() * singles.size());
        for (const auto& p : pairs)
            for (const auto& s : singles)
                next.push_back(EigenPair{p.value + s.value, kron(p.right, s.right),
                                         kron(p.left, s.left)});
        pairs = std::move(next);
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Qubit + three-resonator ring, displaced frame
// ---------------------------------------------------------------------------

DisplacedFrame displaced_amplitudes(const QubitRingSpec& spec) {
    validate_qubit_ring(spec);
    const double third = 2.0 * std::numbers::pi / 3.0;
    DisplacedFrame frame;
    for (int mu = 0; mu < 3; ++mu) {
        const Complex denom{spec.delta_omega + 2.0 * spec.kappa * std::cos(third * mu),
                            -0.5 * spec.gamma_a};
        frame.mode_amplitudes[mu] =
            (-spec.epsilon / std::sqrt(3.0)) * std::exp(kI * (third * mu)) / denom;
    }
    for (int n = 1; n <= 3; ++n) {
        Complex site{0.0, 0.0};
        for (int mu = 0; mu < 3; ++mu)
            site += frame.mode_amplitudes[mu] * std::exp(-kI * (third * mu * double(n)));
        frame.site_amplitudes[n - 1] = site / std::sqrt(3.0);
    }
    frame.eps_eff = spec.g * frame.site_amplitudes[1];  // qubit attaches to site 2
    return frame;
}

namespace {

HilbertSpace qubit_ring_space(const QubitRingSpec& spec) {
    return HilbertSpace{{2, spec.fock_cutoff, spec.fock_cutoff, spec.fock_cutoff}};
}

double mode_detuning(const QubitRingSpec& spec, int mu) {
    return spec.delta_omega + 2.0 * spec.kappa * std::cos(2.0 * std::numbers::pi / 3.0 * mu);
}

}  // namespace

QubitRingHamiltonians qubit_ring_hamiltonians(const QubitRingSpec& spec) {
    validate_qubit_ring(spec);
    const HilbertSpace space = qubit_ring_space(spec);
    const DisplacedFrame frame = displaced_amplitudes(spec);
    const Index d = space.dim();
    const Matrix a = destroy(spec.fock_cutoff);
    const Matrix sp = embed(sigma_plus(), 0, space);

    Matrix h0 = Matrix::Zero(d, d);
    Matrix h1 = Matrix::Zero(d, d);
    for (int mu = 0; mu < 3; ++mu) {
        const Matrix a_mu = embed(a, 1 + static_cast<std::size_t>(mu), space);
        h0 += mode_detuning(spec, mu) * (a_mu.adjoint() * a_mu);
        const Matrix coupling =
            std::exp(-kI * (4.0 * std::numbers::pi / 3.0 * mu)) * (a_mu * sp) / std::sqrt(3.0);
        h1 += coupling + coupling.adjoint();
    }
    h0 += spec.delta_omega * embed(sigma_plus() * sigma_minus(), 0, space);
    h0 += frame.eps_eff * sp + std::conj(frame.eps_eff) * sp.adjoint();
    return QubitRingHamiltonians{std::move(h0), std::move(h1)};
}

QubitRingSystem qubit_ring_split(const QubitRingSpec& spec) {
    const HilbertSpace space = qubit_ring_space(spec);
    const QubitRingHamiltonians hams = qubit_ring_hamiltonians(spec);

    LindbladSpec l0_spec;
    l0_spec.hamiltonian = hams.h0;
    const Matrix a = destroy(spec.fock_cutoff);
    for (int mu = 0; mu < 3; ++mu)
        l0_spec.channels.push_back({embed(a, 1 + static_cast<std::size_t>(mu), space), spec.gamma_a});
    l0_spec.channels.push_back({embed(sigma_minus(), 0, space), spec.gamma_q});
    SuperOp l0 = build_liouvillian(l0_spec, space);

    SuperOp l1 = commutator_superop(hams.h1, space);
    return QubitRingSystem{PTSplit{std::move(l0), std::move(l1), spec.g},
                           displaced_amplitudes(spec), space};
}

SuperOp qubit_ring_direct_liouvillian(const QubitRingSpec& spec) {
    const HilbertSpace space = qubit_ring_space(spec);
    const QubitRingHamiltonians hams = qubit_ring_hamiltonians(spec);
    LindbladSpec full;
    full.hamiltonian = hams.h0 + spec.g * hams.h1;
    const Matrix a = destroy(spec.fock_cutoff);
    for (int mu = 0; mu < 3; ++mu)
        full.channels.push_back({embed(a, 1 + static_cast<std::size_t>(mu), space), spec.gamma_a});
    full.channels.push_back({embed(sigma_minus(), 0, space), spec.gamma_q});
    return build_liouvillian(full, space);
}

std::vector<Matrix> qubit_ring_subsystem_liouvillians(const QubitRingSpec& spec) {
    validate_qubit_ring(spec);
    const DisplacedFrame frame = displaced_amplitudes(spec);

    std::vector<Matrix> blocks;
    {
        HilbertSpace qubit_space{{2}};
        LindbladSpec qubit;
        qubit.hamiltonian = spec.delta_omega * sigma_plus() * sigma_minus() +
                            frame.eps_eff * sigma_plus() + std::conj(frame.eps_eff) * sigma_minus();
        qubit.channels.push_back({sigma_minus(), spec.gamma_q});
        blocks.push_back(build_liouvillian(qubit, qubit_space).matrix);
    }
    for (int mu = 0; mu < 3; ++mu) {
        HilbertSpace mode_space{{spec.fock_cutoff}};
        const Matrix a = destroy(spec.fock_cutoff);
        LindbladSpec mode;
        mode.hamiltonian = mode_detuning(spec, mu) * (a.adjoint() * a);
        mode.channels.push_back({a, spec.gamma_a});
        blocks.push_back(build_liouvillian(mode, mode_space).matrix);
    }
    return blocks;
}

LabFrameObservables lab_frame_observables(const Matrix& rho_displaced, const DisplacedFrame& frame,
                                          int fock_cutoff) {
    const HilbertSpace space{{2, fock_cutoff, fock_cutoff, fock_cutoff}};
    const Index d = space.dim();
    if (rho_displaced.rows() != d || rho_displaced.cols() != d)
        throw DimensionError("lab_frame_observables: state does not match the truncated space");

    const Matrix a = destroy(fock_cutoff);
    Matrix a1_prime = Matrix::Zero(d, d);
    for (int mu = 0; mu < 3; ++mu)
        a1_prime += std::exp(-kI * (2.0 * std::numbers::pi / 3.0 * mu)) *
                    embed(a, 1 + static_cast<std::size_t>(mu), space);
    a1_prime /= std::sqrt(3.0);

    const Complex alpha1 = frame.site_amplitudes[0];
    const Complex a1p = expectation(rho_displaced, a1_prime);
    const Complex n1p = expectation(rho_displaced, Matrix(a1_prime.adjoint() * a1_prime));
    const Complex n1 = n1p + std::conj(alpha1) * a1p + alpha1 * std::conj(a1p) +
                       std::norm(alpha1);
    if (std::abs(n1.imag()) > 1e-12)
        throw Error("lab_frame_observables: <n_1> acquired an imaginary part");

    LabFrameObservables out;
    out.a1 = a1p + alpha1;
    out.n1 = n1.real();
    out.sigma_minus = expectation(rho_displaced, embed(sigma_minus(), 0, space));
    return out;
}

// ---------------------------------------------------------------------------
// Sweep-facing wrappers
// ---------------------------------------------------------------------------

SweepModel make_spin_ring_sweep_model(double eps_over_gamma, double t_over_gamma, int n_sites) {
    SweepModel model;
    model.name = "spin_ring";
    model.sweep_parameter = "delta_omega_over_gamma";
    model.observable_names = {"sigma_minus_1", "n_sigma_1"};
    model.parameters = {{"eps_over_gamma", eps_over_gamma},
                        {"t_over_gamma", t_over_gamma},
                        {"gamma", 1.0},
                        {"n_sites", double(n_sites)}};
    HilbertSpace space(std::vector<Index>(static_cast<std::size_t>(n_sites), Index{2}));
    model.liouville_dim = space.liouville_dim();

    auto spec_at = [=](double dw) {
        return SpinRingSpec{n_sites, dw, eps_over_gamma, t_over_gamma, 1.0};
    };
    model.split_at = [=](double dw) { return spin_ring_split(spec_at(dw)); };
    model.direct_at = [=](double dw) { return spin_ring_direct_liouvillian(spec_at(dw)); };

    const SpinRingObservables obs = spin_ring_observables(n_sites);
    model.observables = [obs](const Matrix& rho, double) {
        return std::map<std::string, Complex>{{"sigma_minus_1", expectation(rho, obs.sigma_minus_1)},
                                              {"n_sigma_1", expectation(rho, obs.n_sigma_1)}};
    };
    return model;
}

SweepModel make_qubit_ring_sweep_model(double kappa_over_eps, double g_over_eps,
                                       double gamma_a_over_eps, double gamma_q_over_eps,
                                       int fock_cutoff) {
    SweepModel model;
    model.name = "qubit_ring";
    model.sweep_parameter = "delta_omega_over_eps";
    model.observable_names = {"a_1", "n_1", "sigma_minus"};
    model.parameters = {{"kappa_over_eps", kappa_over_eps},
                        {"g_over_eps", g_over_eps},
                        {"gamma_a_over_eps", gamma_a_over_eps},
                        {"gamma_q_over_eps", gamma_q_over_eps},
                        {"epsilon", 1.0},
                        {"fock_cutoff", double(fock_cutoff)}};
    HilbertSpace space{{2, fock_cutoff, fock_cutoff, fock_cutoff}};
    model.liouville_dim = space.liouville_dim();

    auto spec_at = [=](double dw) {
        return QubitRingSpec{fock_cutoff, dw,           1.0,
                             kappa_over_eps, g_over_eps, gamma_a_over_eps,
                             gamma_q_over_eps};
    };
    model.split_at = [=](double dw) { return qubit_ring_split(spec_at(dw)).split; };
    model.direct_at = [=](double dw) { return qubit_ring_direct_liouvillian(spec_at(dw)); };
    model.l0_steady_hint = [=](double dw) {
        // product of the subsystem steady states, subsystem order
        // [qubit, mode0, mode1, mode2]
        const QubitRingSpec spec = spec_at(dw);
        const auto blocks = qubit_ring_subsystem_liouvillians(spec);
        const std::vector<Index> dims = {2, spec.fock_cutoff, spec.fock_cutoff, spec.fock_cutoff};
        Matrix rho = Matrix::Identity(1, 1);
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            HilbertSpace sub{{dims[i]}};
            rho = kron(rho, steady_state_exact(SuperOp{blocks[i], sub}));
        }
        return rho;
    };
    model.observables = [=](const Matrix& rho, double dw) {
        const LabFrameObservables lab =
            lab_frame_observables(rho, displaced_amplitudes(spec_at(dw)), fock_cutoff);
        return std::map<std::string, Complex>{
            {"a_1", lab.a1}, {"n_1", Complex{lab.n1, 0.0}}, {"sigma_minus", lab.sigma_minus}};
    };
    return model;
}

}  // namespace lpt
