#pragma once

#include <vector>

#include "lpt/linalg.hpp"

namespace lpt {

// ---------------------------------------------------------------------------
// Hilbert-space bookkeeping and elementary operators
// ---------------------------------------------------------------------------

/// Tensor-product structure of the system Hilbert space.
struct HilbertSpace {
    std::vector<Index> subsystem_dims;

    explicit HilbertSpace(std::vector<Index> dims) : subsystem_dims(std::move(dims)) {
        if (subsystem_dims.empty()) throw std::invalid_argument("HilbertSpace: no subsystems");
        for (Index d : subsystem_dims)
            if (d < 2) throw std::invalid_argument("HilbertSpace: every subsystem dim must be >= 2");
    }

    Index dim() const {
        Index d = 1;
        for (Index s : subsystem_dims) d *= s;
        return d;
    }
    Index liouville_dim() const { return dim() * dim(); }
};

inline Matrix identity(Index d) { return Matrix::Identity(d, d); }

/// |0><1| in the {ground, excited} basis.
inline Matrix sigma_minus() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

inline Matrix sigma_plus() { return sigma_minus().adjoint(); }

/// Truncated-Fock annihilation operator, a|n> = sqrt(n)|n-1>.
inline Matrix destroy(Index fock_dim) {
    Matrix a = Matrix::Zero(fock_dim, fock_dim);
    for (Index n = 1; n < fock_dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

/// Lifts a single-subsystem operator to the full space (identities elsewhere).
Matrix embed(const Matrix& op, std::size_t site, const HilbertSpace& space);

// ---------------------------------------------------------------------------
// Lindblad generators
// ---------------------------------------------------------------------------

struct LindbladSpec {
    Matrix hamiltonian;  // Hermitian, units of angular frequency (hbar = 1)
    struct Channel {
        Matrix collapse_op;
        double rate = 0.0;  // >= 0, angular frequency
    };
    std::vector<Channel> channels;
};

/// A superoperator as a dense matrix acting on column-stacked density matrices.
struct SuperOp {
    Matrix matrix;  // D x D with D = dim^2
    HilbertSpace hilbert;

    Index dim() const { return hilbert.dim(); }
};

/// One Liouvillian mode: eigenvalue, right eigenstate, bi-orthonormal left.
struct EigenPair {
    Complex value;
    Matrix right;  // rho^mu
    Matrix left;   // sigma^mu, normalized so <sigma^mu, rho^mu> = 1
};

/// Applies the superoperator to a density-matrix-shaped operator.
Matrix apply_superop(const SuperOp& sop, const Matrix& rho);

/// Matrix form of D[c]rho = c rho c^dag - 1/2 {c^dag c, rho} (column stacking):
///   conj(c) (x) c - 1/2 I (x) (c^dag c) - 1/2 (c^dag c)^T (x) I
SuperOp dissipator_superop(const Matrix& c, const HilbertSpace& space);

/// -i (I (x) h - h^T (x) I), the superoperator of -i[h, .]. Trace preserving
/// on its own, so commutator perturbations are valid L1 blocks.
SuperOp commutator_superop(const Matrix& h, const HilbertSpace& space);

/// -i (I (x) H - H^T (x) I) + sum_k rate_k * dissipator(c_k).
/// Verifies that vec(I) is a left null vector (trace preservation).
SuperOp build_liouvillian(const LindbladSpec& spec, const HilbertSpace& space);

/// Full bi-orthonormalized eigensystem. Lefts come from the inverse of the
/// right-eigenvector matrix, so <sigma^mu, rho^nu> = delta by construction.
/// Pairs are sorted by descending Re(lambda), then ascending |Im(lambda)|;
/// the mu = 0 right eigenstate is returned Hermitized with unit trace.
/// Throws Defective when the eigenvector matrix condition number explodes.
std::vector<EigenPair> eig_biorthonormal(const SuperOp& sop);

/// Unique solution of L rho = 0 with Tr rho = 1, returned Hermitian and
/// checked positive semidefinite. Throws NonUniqueSteadyState when the zero
/// eigenvalue is degenerate.
Matrix steady_state_exact(const SuperOp& sop);

/// Tr(op * rho).
Complex expectation(const Matrix& rho, const Matrix& op);

}  // namespace lpt
