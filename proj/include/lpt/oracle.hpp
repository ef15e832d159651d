#pragma once

#include <span>

#include "lpt/amp_pt.hpp"
#include "lpt/models.hpp"

namespace lpt {

// ---------------------------------------------------------------------------
// Sweep results
// ---------------------------------------------------------------------------

enum class MethodTag { exact, unperturbed, dm_pt, amp_pt };

std::string method_name(MethodTag tag);

struct SweepResult {
    std::vector<double> grid;
    std::map<std::string, std::vector<Complex>> observables;  // same length as grid
    MethodTag method_tag = MethodTag::exact;
    std::map<std::string, double> metadata;  // model snapshot + order M + c
};

struct ExactSweepOptions {
    Index dim_cap = 4096;  // refuse Liouville dims beyond desk scale
};

/// Steady state by exact diagonalization at every grid point, using the
/// assembly-independent generator. Deterministic; errors carry grid context.
SweepResult exact_sweep(const SweepModel& model, std::span<const double> grid,
                        const ExactSweepOptions& options = {});

// ---------------------------------------------------------------------------
// Driven damped two-level system in closed form
// ---------------------------------------------------------------------------

/// Steady state of L = -i[dw sp sm + eps(sp+sm), .] + gamma D[sm] from the
/// closed-form Bloch solve (derivation in docs/tls_steady_state.md):
///   <sm>  = -eps (dw + i gamma/2) / (dw^2 + gamma^2/4 + 2 eps^2)
///   pop_e =  eps^2              / (dw^2 + gamma^2/4 + 2 eps^2)
struct TlsSteady {
    Complex sigma_minus;
    double pop_e;
};

TlsSteady tls_steady_analytic(double delta_omega, double epsilon, double gamma);

// ---------------------------------------------------------------------------
// Eigenpair continuation in the coupling strength
// ---------------------------------------------------------------------------

struct TrackedPath {
    std::vector<EigenPair> pairs;    // one per alpha
    std::vector<double> overlaps;    // |<prev right, candidate right>| (normalized)
};

/// Diagonalizes L0 + alpha L1 for each alpha and follows the branch seeded by
/// `seed` by maximal right-state overlap. Throws TrackingLost below 0.7.
TrackedPath track_eigenpair(const PTSplit& split, const EigenPair& seed,
                            std::span<const double> alphas);

// ---------------------------------------------------------------------------
// Convergence-slope harness
// ---------------------------------------------------------------------------

struct SlopeFit {
    double slope = 0.0;
    std::vector<double> alphas;
    std::vector<double> errors;
};

/// Least-squares slope of log10(y) against log10(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

struct SlopeOptions {
    int samples = 7;
    PTOptions pt;
    /// errors below this are treated as numerical noise (100x machine noise)
    double noise_floor = 1e-13;
    /// Assembly-independent exact generator at alpha; defaults to L0 + alpha L1.
    std::function<SuperOp(double)> exact_at;
};

/// Truncation error of the order-M steady-state PT against the exact steady
/// state of L0 + alpha L1 over [alpha_lo, alpha_hi]. `observable` empty means
/// trace-norm state error, otherwise |Tr(O rho~) - Tr(O rho_exact)|.
/// Throws ErrorFloor when fewer than 5 samples rise above numerical noise.
SlopeFit convergence_slope(const PTSplit& split,
                           const std::function<std::map<std::string, Complex>(const Matrix&)>& observe,
                           const std::string& observable, int order, double alpha_lo,
                           double alpha_hi, const SlopeOptions& options = {});

// ---------------------------------------------------------------------------
// Kronecker-sum spectral solver for decoupled generators
// ---------------------------------------------------------------------------

/// L0 of a decoupled model is a Kronecker sum of small subsystem generators in
/// Liouville space. Diagonalizing the blocks gives the full eigensystem; the
/// Moore-Penrose action of L0^+ on range vectors is the spectral solve with
/// the null coordinate zeroed, followed by projection orthogonal to the
/// steady state. Scales to truncations where dense D x D work is infeasible.
class KronLiouvilleSolver {
  public:
    KronLiouvilleSolver(std::vector<Matrix> subsystem_liouvillians,
                        std::vector<Index> hilbert_dims);

    Index dim() const { return d_; }
    Index liouville_dim() const { return big_d_; }

    /// Unit-trace Hermitian steady state (product of subsystem steady states).
    Matrix steady_state() const;

    /// Exact L0 application (for residual checks and tests).
    Vector apply_l0(const Vector& x) const;

    /// Moore-Penrose pseudoinverse action of L0 on b.
    Vector pinv_apply(const Vector& b) const;

  private:
    Vector contract_all(const Vector& x, bool inverse) const;

    std::vector<Matrix> blocks_;   // subsystem Liouvillians
    std::vector<Matrix> w_, w_inv_;
    std::vector<Vector> evals_;
    std::vector<Index> null_idx_;
    std::vector<Index> hdims_;
    std::vector<Index> hstrides_;
    Index d_ = 0, big_d_ = 0;
    Vector steady_vec_;  // unit-norm right null vector of L0
};

// ---------------------------------------------------------------------------
// Fock-cutoff convergence oracle for the qubit ring
// ---------------------------------------------------------------------------

/// Lab-frame observables of the order-0, density-PT and amplitude-PT steady
/// states, computed entirely through the spectral solver (no dense D x D
/// superoperator is ever formed). Agrees with the dense pipeline and scales
/// to cutoffs where the dense route cannot run.
struct QubitRingMethodObservables {
    std::map<std::string, Complex> order0;
    std::map<std::string, Complex> dm_pt;
    std::map<std::string, Complex> amp_pt;
};

QubitRingMethodObservables qubit_ring_structured_observables(const QubitRingSpec& spec, int order,
                                                             double reg_c);

struct CutoffConvergenceReport {
    double max_change = 0.0;  // over methods, observables and sample points
    std::map<std::string, double> per_observable;  // keyed "method/observable"
};

/// Compares order-0, density-PT and amplitude-PT observables between two Fock
/// cutoffs at sampled detunings, using the spectral solver so that the larger
/// truncation never materializes a dense superoperator.
CutoffConvergenceReport qubit_ring_cutoff_convergence(const QubitRingSpec& base,
                                                      std::span<const double> sample_deltas,
                                                      int cutoff_a, int cutoff_b, int order,
                                                      double reg_c);

}  // namespace lpt
