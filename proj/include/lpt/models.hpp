#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>

#include "lpt/dm_pt.hpp"

namespace lpt {

// ---------------------------------------------------------------------------
// Four spins coupled in a ring
// ---------------------------------------------------------------------------

/// All parameters are angular frequencies (hbar = 1).
struct SpinRingSpec {
    int n_sites = 4;
    double delta_omega = 0.0;  // omega_0 - omega_d
    double epsilon = 0.0;      // drive strength
    double t_coupling = 0.0;   // flip-flop strength
    double gamma = 1.0;        // relaxation rate, > 0 for a unique steady state
};

/// L0 collects the on-site physics (the atomic limit), L1 the flip-flop
/// coupling -i[sum_n (sp_n sm_{n+1} + sm_n sp_{n+1}), .] with periodic
/// boundary; the full generator is L0 + t * L1.
PTSplit spin_ring_split(const SpinRingSpec& spec);

/// One-shot build of the full generator from the total Hamiltonian; used as
/// the assembly-independent reference for the split and for exact curves.
SuperOp spin_ring_direct_liouvillian(const SpinRingSpec& spec);

struct SpinRingObservables {
    Matrix sigma_minus_1;  // sigma^-_1
    Matrix n_sigma_1;      // sigma^+_1 sigma^-_1
};

SpinRingObservables spin_ring_observables(int n_sites);

/// Full eigensystem of the uncoupled (t = 0) ring as tensor products of
/// single-spin eigenpairs. The atomic limit is solvable this way without
/// diagonalizing the (exactly degenerate) big generator.
std::vector<EigenPair> uncoupled_spin_eigenpairs(const SpinRingSpec& spec);

// ---------------------------------------------------------------------------
// Single qubit coupled to a three-resonator ring (displaced frame)
// ---------------------------------------------------------------------------

struct QubitRingSpec {
    int fock_cutoff = 3;        // per displaced mode
    double delta_omega = 0.0;   // omega - omega_d
    double epsilon = 1.0;       // drive on site 1
    double kappa = 10.0;        // photon hopping
    double g = 0.5;             // qubit coupling (site 2)
    double gamma_a = 0.05;      // photon decay
    double gamma_q = 0.05;      // qubit relaxation
};

/// Coherent response of the decoupled driven ring, used to displace the
/// eigenmodes: alpha~_mu = (-eps/sqrt(3)) e^{i 2pi mu/3} / (dw + 2k cos(2pi mu/3) - i ga/2).
struct DisplacedFrame {
    std::array<Complex, 3> mode_amplitudes;  // alpha~_mu, mu = 0,1,2
    std::array<Complex, 3> site_amplitudes;  // alpha_n, sites n = 1,2,3
    Complex eps_eff;                         // effective qubit drive g * alpha_2
};

DisplacedFrame displaced_amplitudes(const QubitRingSpec& spec);

/// Hilbert space: qubit (site 0) then the three displaced modes, each
/// truncated to fock_cutoff. L0 is the decoupled displaced generator, L1 the
/// qubit-mode coupling; the full generator is L0 + g * L1.
struct QubitRingSystem {
    PTSplit split;
    DisplacedFrame frame;
    HilbertSpace space;
};

QubitRingSystem qubit_ring_split(const QubitRingSpec& spec);

SuperOp qubit_ring_direct_liouvillian(const QubitRingSpec& spec);

/// Subsystem generators in subsystem order [qubit, mode0, mode1, mode2]; the
/// decoupled L0 is their Kronecker sum in Liouville space.
std::vector<Matrix> qubit_ring_subsystem_liouvillians(const QubitRingSpec& spec);

/// Hilbert-space Hamiltonians of the split, for matrix-side application of
/// the generators without materializing D x D superoperators.
struct QubitRingHamiltonians {
    Matrix h0;
    Matrix h1;
};
QubitRingHamiltonians qubit_ring_hamiltonians(const QubitRingSpec& spec);

/// Undoes the displacement for the site-1 observables:
///   <a_1> = <a'_1> + alpha_1,
///   <n_1> = <a'^dag_1 a'_1> + conj(alpha_1)<a'_1> + alpha_1 <a'^dag_1> + |alpha_1|^2.
struct LabFrameObservables {
    Complex a1;
    double n1;
    Complex sigma_minus;
};

LabFrameObservables lab_frame_observables(const Matrix& rho_displaced, const DisplacedFrame& frame,
                                          int fock_cutoff);

// ---------------------------------------------------------------------------
// Sweep-facing wrapper shared by the oracle and the CLI
// ---------------------------------------------------------------------------

struct SweepModel {
    std::string name;
    std::string sweep_parameter;
    std::vector<std::string> observable_names;
    Index liouville_dim = 0;
    std::map<std::string, double> parameters;  // model snapshot for manifests
    /// Split at a given sweep value (the detuning).
    std::function<PTSplit(double)> split_at;
    /// Assembly-independent full generator at a given sweep value.
    std::function<SuperOp(double)> direct_at;
    /// Observables of a steady state computed at a given sweep value.
    std::function<std::map<std::string, Complex>(const Matrix& rho, double x)> observables;
    /// Optional cheap route to the L0 steady state (product structure);
    /// consumers verify it against L0 before use.
    std::function<Matrix(double)> l0_steady_hint;
};

/// delta_omega is swept in units of gamma; gamma = 1 internally.
SweepModel make_spin_ring_sweep_model(double eps_over_gamma, double t_over_gamma, int n_sites = 4);

/// delta_omega is swept in units of epsilon; epsilon = 1 internally.
SweepModel make_qubit_ring_sweep_model(double kappa_over_eps, double g_over_eps,
                                       double gamma_a_over_eps, double gamma_q_over_eps,
                                       int fock_cutoff = 3);

}  // namespace lpt
