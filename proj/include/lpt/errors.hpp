#pragma once

#include <stdexcept>
#include <string>

namespace lpt {

/// Base class for all numerical/domain failures raised by this library.
/// Programmer errors (bad call arguments) throw std::invalid_argument instead.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// SVD did not converge.
struct SvdFailure : Error {
    explicit SvdFailure(const std::string& what) : Error(what) {}
};

/// Cholesky pivot was non-positive; caller may retry with a correction matrix.
struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

/// Eigenvector matrix too ill-conditioned: spectrum treated as non-diagonalizable.
struct Defective : Error {
    explicit Defective(const std::string& what) : Error(what) {}
};

struct NonUniqueSteadyState : Error {
    explicit NonUniqueSteadyState(const std::string& what) : Error(what) {}
};

/// Seed eigenvalue fails the non-degeneracy gap check.
struct Degenerate : Error {
    explicit Degenerate(const std::string& what) : Error(what) {}
};

/// Right-hand side of a recursion step is not orthogonal to the left null state.
struct SolvabilityViolation : Error {
    explicit SolvabilityViolation(const std::string& what) : Error(what) {}
};

/// Trace of the truncated series vanished; cannot normalize.
struct NormalizationFailure : Error {
    explicit NormalizationFailure(const std::string& what) : Error(what) {}
};

/// The Z0 system is singular; increasing the correction-matrix parameter c may help.
struct SingularZ0 : Error {
    explicit SingularZ0(const std::string& what) : Error(what) {}
};

/// Eigenpair continuation lost the branch (overlap below threshold).
struct TrackingLost : Error {
    explicit TrackingLost(const std::string& what) : Error(what) {}
};

/// Errors are at numerical noise; a convergence slope would be meaningless.
struct ErrorFloor : Error {
    explicit ErrorFloor(const std::string& what) : Error(what) {}
};

/// Invalid run configuration (CLI exit code 2).
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace lpt
