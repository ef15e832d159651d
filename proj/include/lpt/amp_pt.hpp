#pragma once

#include <Eigen/LU>
#include <memory>
#include <span>

#include "lpt/linalg.hpp"

namespace lpt {

// ---------------------------------------------------------------------------
// Amplitude-matrix series: rho = zeta zeta^dag with zeta lower triangular
// ---------------------------------------------------------------------------

/// Lower-triangular corrections zeta^(0..M). All diagonals are kept real
/// (zeta^(0) additionally non-negative), which makes the order-j systems
/// square: d real diagonal + d(d-1) real off-diagonal unknowns = d^2.
///
/// The corrections live in a diagonally pivoted basis (descending rho^(0)
/// diagonal). The forward eliminations divide by column diagonals of
/// zeta^(0); with near-singular seeds, pivoting keeps the populated states in
/// the early columns so the series stays stable as the correction parameter
/// c shrinks. reconstruct_density undoes the permutation.
struct AmplitudeSeries {
    int order = 0;
    std::vector<Matrix> corrections;  // zeta^(0..M), pivoted basis
    double reg_c = 0.0;               // correction-matrix parameter c
    double z0_condition = 0.0;        // 1-norm condition estimate of the Z0 system
    std::vector<Index> pivot;         // basis permutation; empty means identity
};

/// Cholesky factor of rho0 + c*I. Throws NotPositiveDefinite when the shifted
/// matrix still has a non-positive pivot (caller should raise c).
Matrix seed_amplitude(const Matrix& rho0, double c);

/// The real-linear map X -> zeta0 X^dag + X zeta0^dag conjugates its argument,
/// so it is assembled over d^2 real coordinates (lower-triangular X with real
/// diagonal in, Hermitian matrices out) as a dense d^2 x d^2 real system.
struct Z0System {
    Matrix zeta0;
    RealMatrix real_linear_matrix;  // d^2 x d^2
    double condition = 0.0;         // 1-norm condition estimate from the LU
    std::shared_ptr<const Eigen::PartialPivLU<RealMatrix>> lu;

    Index dim() const { return zeta0.rows(); }
};

Z0System build_z0_system(const Matrix& zeta0);

/// Solves Z0 X = h for lower-triangular X with real diagonal; h must be
/// Hermitian. Throws SingularZ0 when the factorization is numerically singular.
Matrix z0_solve(const Z0System& system, const Matrix& h);

/// Same solution by forward substitution down the columns of zeta0 (valid for
/// the triangular zeta0 produced by seed_amplitude). Used where the dense
/// d^2 x d^2 system would be prohibitively large; cross-checked against
/// z0_solve in the tests.
Matrix z0_solve_triangular(const Matrix& zeta0, const Matrix& h);

/// Order-by-order corrections: zeta^(0) from the (regularized) Cholesky seed,
/// then Z0 zeta^(j) = rho^(j) - sum_{k=1}^{j-1} zeta^(k) (zeta^(j-k))^dag.
/// The right-hand side is checked Hermitian at every order.
AmplitudeSeries amp_pt_corrections(const std::vector<Matrix>& rho_corrections, double c,
                                   bool use_triangular_solver = false);

/// N[zeta~ zeta~^dag] with zeta~ = sum_{j<=M} alpha^j zeta^(j): Hermitian,
/// unit trace and positive semidefinite up to roundoff.
Matrix reconstruct_density(const AmplitudeSeries& series, double alpha);

/// c = 0 when rho0 is safely positive definite (min eigenvalue > 1e-8),
/// else 1e-9.
double default_reg_c(const Matrix& rho0);

/// Built-in stability diagnostic: max pairwise trace-norm distance between
/// reconstructions across the given c values. Large values flag the
/// no-power-series case that the correction matrix cannot fix.
double amp_c_stability(const std::vector<Matrix>& rho_corrections, std::span<const double> cs,
                       double alpha);

}  // namespace lpt
