#pragma once

#include <Eigen/LU>
#include <memory>
#include <optional>
#include <span>

#include "lpt/liouville.hpp"

namespace lpt {

// ---------------------------------------------------------------------------
// Perturbative split L = L0 + alpha * L1
// ---------------------------------------------------------------------------

/// L1 is scaled so the physical coupling (t or g) multiplies it directly;
/// `coupling` carries that physical value for order counting.
struct PTSplit {
    SuperOp l0;
    SuperOp l1;
    double coupling = 0.0;
};

/// L0 + alpha * L1 as a plain superoperator.
SuperOp total_liouvillian(const PTSplit& split, double alpha);

/// Checks that L0 is trace preserving and that vec(I) is a left null vector
/// of L1 as well (L1 = L - L0 between two proper generators).
void validate_split(const PTSplit& split);

/// Ordered corrections of one Liouvillian mode.
struct PTSeries {
    Index mu_label = 0;
    double alpha = 0.0;  // physical coupling value, multiplies order j as alpha^j
    int order = 0;
    std::vector<Complex> eigvalue_corrections;  // lambda^(0..M)
    std::vector<Matrix> state_corrections;      // rho^(0..M)
    double solvability_max = 0.0;  // max |<sigma_hat, f_j>| / ||f_j|| over the recursion
};

// ---------------------------------------------------------------------------
// Pseudoinverse of the shifted generator
// ---------------------------------------------------------------------------

/// Applies (L0 - lambda0)^+ to vectors. Two interchangeable backends:
///  - svd: the dense SVD pseudoinverse (linalg::pinv);
///  - bordered: one LU of [[A, y],[z^dag, 0]] where z/y span the known
///    rank-1 right/left null spaces of A = L0 - lambda0. For such A the
///    bordered solve returns exactly the Moore-Penrose action (least-squares
///    defect along y, minimum-norm solution orthogonal to z) at LU cost.
/// An LU factored in place over its own storage (no second D x D copy).
struct InplaceLU {
    Matrix storage;
    Eigen::PartialPivLU<Eigen::Ref<Matrix>> lu;

    explicit InplaceLU(Matrix m) : storage(std::move(m)), lu(storage) {}

    /// min/max modulus of the U diagonal; ~0 flags a singular system.
    double pivot_ratio() const {
        const auto diag = lu.matrixLU().diagonal().cwiseAbs();
        const double top = diag.maxCoeff();
        return top > 0.0 ? diag.minCoeff() / top : 0.0;
    }
};

class PinvOperator {
  public:
    static PinvOperator from_svd(const Matrix& shifted, double rel_tol = kDefaultPinvRelTol);
    static PinvOperator from_null_pair(const Matrix& shifted, const Vector& right_null,
                                       const Vector& left_null);

    Vector apply(const Vector& b) const;
    Index rank() const { return rank_; }

  private:
    PinvOperator() = default;
    std::optional<Pinv> svd_;
    std::shared_ptr<const InplaceLU> lu_;
    double border_scale_ = 1.0;
    Index rank_ = 0;
    Index dim_ = 0;
};

enum class PinvMethod {
    svd,       // dense SVD pseudoinverse
    bordered,  // bordered-LU action via the known null pair
    automatic  // svd up to svd_max_dim, bordered beyond
};

struct PTOptions {
    PinvMethod pinv_method = PinvMethod::automatic;
    double pinv_rel_tol = kDefaultPinvRelTol;
    Index svd_max_dim = 1024;  // Liouville dim above which `automatic` switches to bordered
    /// Optional precomputed unit-trace steady state of L0 (e.g. from a
    /// product-structure solve). Verified against L0 before use.
    const Matrix* steady_state_hint = nullptr;
};

// ---------------------------------------------------------------------------
// Recursions
// ---------------------------------------------------------------------------

/// General-mode recursion:
///   lambda^(j) = <sigma^(0), L1 rho^(j-1)> - sum_{k=1}^{j-1} lambda^(k) <sigma^(0), rho^(j-k)>
///   rho^(j)    = (L0 - lambda^(0))^+ (-L1 rho^(j-1) + sum_{k=1}^{j} lambda^(k) rho^(j-k))
/// Solvability <sigma^(0), f_j> ~ 0 is asserted before every solve.
/// The seed eigenvalue must pass a non-degeneracy gap check against the full
/// L0 spectrum (relative gap 1e-8), else Degenerate is thrown.
PTSeries pt_eigenpair(const PTSplit& split, const EigenPair& seed, int order,
                      const PTOptions& options = {});

/// Steady-state specialization: all eigenvalue corrections vanish and
///   rho_s^(j) = -L0^+ L1 rho_s^(j-1),
/// seeded with the exact unit-trace steady state of L0. Every correction is
/// checked Hermitian to 1e-10 (relative max norm).
PTSeries pt_steady_state(const PTSplit& split, int order, const PTOptions& options = {});

/// Same recursion with a different generalized-inverse choice: after solving
/// order j, shifts[j-1] * rho^(0) is added and the shifted correction feeds
/// order j+1. Truncated results differ from pt_steady_state at order M+1.
PTSeries pt_steady_state_shifted(const PTSplit& split, int order, std::span<const double> shifts,
                                 const PTOptions& options = {});

/// Normalized truncated sum N[sum_j alpha^j rho^(j)] evaluated at the stored
/// series.alpha. Hermitian and unit trace; positivity is NOT guaranteed.
Matrix assemble_truncated(const PTSeries& series);
Matrix assemble_truncated(const PTSeries& series, double alpha);

struct PositivityReport {
    double min_eig = 0.0;
    bool positive = false;  // min_eig >= -1e-12
};

PositivityReport positivity_report(const Matrix& rho);

}  // namespace lpt
