#include "lpt/amp_pt.hpp"

#include <cmath>
#include <numeric>

namespace lpt {

namespace {

constexpr double kRhsHermTol = 1e-9;
constexpr double kSingularRcond = 1e-14;

void check_lower_triangular_real_diag(const Matrix& zeta0, const char* who) {
    const Index d = zeta0.rows();
    if (d != zeta0.cols()) throw DimensionError(std::string(who) + ": matrix must be square");
    const double scale = std::max(max_norm(zeta0), 1e-300);
    for (Index j = 0; j < d; ++j) {
        if (std::abs(zeta0(j, j).imag()) > 1e-12 * scale)
            throw std::invalid_argument(std::string(who) + ": diagonal must be real");
        for (Index i = 0; i < j; ++i)
            if (std::abs(zeta0(i, j)) > 1e-14 * scale)
                throw std::invalid_argument(std::string(who) + ": matrix must be lower triangular");
    }
}

// d^2 real coordinates of a lower-triangular-with-real-diagonal matrix (and,
// with the same layout, of the lower part of a Hermitian matrix): column by
// column, the real diagonal entry first, then (Re, Im) of each entry below it.
struct CoordLayout {
    Index d;
    explicit CoordLayout(Index dim) : d(dim) {}

    Index diag(Index j) const { return offset(j); }
    Index lower_re(Index i, Index j) const { return offset(j) + 1 + 2 * (i - j - 1); }
    Index lower_im(Index i, Index j) const { return offset(j) + 2 + 2 * (i - j - 1); }
    Index size() const { return d * d; }

  private:
    // column j holds 1 + 2*(d-1-j) reals
    Index offset(Index j) const { return j + 2 * (j * d - j * (j + 1) / 2); }
};

RealVector pack_hermitian(const Matrix& h, const CoordLayout& lay) {
    RealVector v(lay.size());
    for (Index j = 0; j < lay.d; ++j) {
        v(lay.diag(j)) = h(j, j).real();
        for (Index i = j + 1; i < lay.d; ++i) {
            v(lay.lower_re(i, j)) = h(i, j).real();
            v(lay.lower_im(i, j)) = h(i, j).imag();
        }
    }
    return v;
}

Matrix unpack_lower(const RealVector& v, const CoordLayout& lay) {
    Matrix x = Matrix::Zero(lay.d, lay.d);
    for (Index j = 0; j < lay.d; ++j) {
        x(j, j) = v(lay.diag(j));
        for (Index i = j + 1; i < lay.d; ++i)
            x(i, j) = Complex(v(lay.lower_re(i, j)), v(lay.lower_im(i, j)));
    }
    return x;
}

}  // namespace

Matrix seed_amplitude(const Matrix& rho0, double c) {
    if (c < 0.0) throw std::invalid_argument("seed_amplitude: c must be >= 0");
    if (!is_hermitian(rho0))
        throw std::invalid_argument("seed_amplitude: rho0 is not Hermitian to tolerance");
    if (std::abs(rho0.trace() - Complex{1.0, 0.0}) > 1e-8)
        throw std::invalid_argument("seed_amplitude: rho0 must have unit trace");
    if (min_eigenvalue_hermitian(rho0) < -1e-12)
        throw std::invalid_argument("seed_amplitude: rho0 is not PSD to tolerance");

    const Matrix shifted = rho0 + c * Matrix::Identity(rho0.rows(), rho0.cols());
    try {
        return cholesky_lower(shifted);
    } catch (const NotPositiveDefinite& e) {
        throw NotPositiveDefinite(std::string(e.what()) +
                                  " (seed_amplitude: raise the correction parameter c)");
    }
}

Z0System build_z0_system(const Matrix& zeta0) {
    check_lower_triangular_real_diag(zeta0, "build_z0_system");
    const Index d = zeta0.rows();
    const CoordLayout lay(d);

    // The image of the basis element E = e * |b><c| (e = 1 or i, c <= b) is
    // supported on row b and column b:
    //   G(x,b) = conj(e) zeta0(x,c),  G(b,y) = e conj(zeta0(y,c)),
    //   G(b,b) = 2 Re(conj(e) zeta0(b,c)).
    RealMatrix z = RealMatrix::Zero(lay.size(), lay.size());
    auto fill_column = [&](Index q, Index b, Index c, Complex e) {
        const Complex ce = std::conj(e);
        for (Index x = b + 1; x < d; ++x) {
            const Complex g = ce * zeta0(x, c);
            z(lay.lower_re(x, b), q) += g.real();
            z(lay.lower_im(x, b), q) += g.imag();
        }
        for (Index y = 0; y < b; ++y) {
            const Complex g = e * std::conj(zeta0(y, c));
            z(lay.lower_re(b, y), q) += g.real();
            z(lay.lower_im(b, y), q) += g.imag();
        }
        z(lay.diag(b), q) += 2.0 * (ce * zeta0(b, c)).real();
    };
    for (Index c = 0; c < d; ++c) {
        fill_column(lay.diag(c), c, c, Complex{1.0, 0.0});
        for (Index b = c + 1; b < d; ++b) {
            fill_column(lay.lower_re(b, c), b, c, Complex{1.0, 0.0});
            fill_column(lay.lower_im(b, c), b, c, Complex{0.0, 1.0});
        }
    }

    Z0System system;
    system.zeta0 = zeta0;
    system.lu = std::make_shared<Eigen::PartialPivLU<RealMatrix>>(z);
    const double rc = system.lu->rcond();
    system.condition = (rc > 0.0 && std::isfinite(rc)) ? 1.0 / rc
                                                       : std::numeric_limits<double>::infinity();
    system.real_linear_matrix = std::move(z);
    return system;
}

Matrix z0_solve(const Z0System& system, const Matrix& h) {
    const Index d = system.dim();
    if (h.rows() != d || h.cols() != d) throw DimensionError("z0_solve: dimension mismatch");
    if (!system.lu) throw std::invalid_argument("z0_solve: system not factorized");
    const double rc = system.lu->rcond();
    if (!std::isfinite(rc) || rc < kSingularRcond)
        throw SingularZ0("z0_solve: Z0 system numerically singular (rcond < 1e-14); "
                         "increase the correction parameter c");
    const CoordLayout lay(d);
    return unpack_lower(RealVector(system.lu->solve(pack_hermitian(h, lay))), lay);
}

Matrix z0_solve_triangular(const Matrix& zeta0, const Matrix& h) {
    check_lower_triangular_real_diag(zeta0, "z0_solve_triangular");
    const Index d = zeta0.rows();
    if (h.rows() != d || h.cols() != d)
        throw DimensionError("z0_solve_triangular: dimension mismatch");

    Matrix x = Matrix::Zero(d, d);
    for (Index b = 0; b < d; ++b) {
        const double pivot = zeta0(b, b).real();
        if (!(std::abs(pivot) > 1e-150))
            throw SingularZ0("z0_solve_triangular: zero diagonal pivot at index " +
                             std::to_string(b) + "; increase the correction parameter c");
        Complex acc{0.0, 0.0};
        for (Index c = 0; c < b; ++c) acc += zeta0(b, c) * std::conj(x(b, c));
        x(b, b) = (h(b, b).real() - 2.0 * acc.real()) / (2.0 * pivot);
        for (Index a = b + 1; a < d; ++a) {
            Complex s = h(a, b);
            for (Index c = 0; c <= b; ++c) s -= zeta0(a, c) * std::conj(x(b, c));
            for (Index c = 0; c < b; ++c) s -= x(a, c) * std::conj(zeta0(b, c));
            x(a, b) = s / pivot;
        }
    }
    return x;
}

namespace {

Matrix apply_pivot(const Matrix& m, const std::vector<Index>& pivot) {
    const Index d = m.rows();
    Matrix out(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            out(i, j) = m(pivot[static_cast<std::size_t>(i)], pivot[static_cast<std::size_t>(j)]);
    return out;
}

Matrix undo_pivot(const Matrix& m, const std::vector<Index>& pivot) {
    const Index d = m.rows();
    Matrix out(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            out(pivot[static_cast<std::size_t>(i)], pivot[static_cast<std::size_t>(j)]) = m(i, j);
    return out;
}

}  // namespace

AmplitudeSeries amp_pt_corrections(const std::vector<Matrix>& rho_corrections, double c,
                                   bool use_triangular_solver) {
    if (rho_corrections.empty())
        throw std::invalid_argument("amp_pt_corrections: no corrections supplied");

    AmplitudeSeries series;
    series.order = static_cast<int>(rho_corrections.size()) - 1;
    series.reg_c = c;

    const Index d = rho_corrections[0].rows();
    series.pivot.resize(static_cast<std::size_t>(d));
    std::iota(series.pivot.begin(), series.pivot.end(), Index{0});
    std::stable_sort(series.pivot.begin(), series.pivot.end(), [&](Index a, Index b) {
        return rho_corrections[0](a, a).real() > rho_corrections[0](b, b).real();
    });

    series.corrections.reserve(rho_corrections.size());
    series.corrections.push_back(
        seed_amplitude(apply_pivot(rho_corrections[0], series.pivot), c));
    const Matrix zeta0 = series.corrections[0];

    Z0System system;
    if (!use_triangular_solver) {
        system = build_z0_system(zeta0);
        series.z0_condition = system.condition;
    }

    for (std::size_t j = 1; j < rho_corrections.size(); ++j) {
        Matrix rhs = apply_pivot(rho_corrections[j], series.pivot);
        for (std::size_t k = 1; k < j; ++k)
            rhs -= series.corrections[k] * series.corrections[j - k].adjoint();

        const double scale = std::max(max_norm(rhs), 1e-300);
        if (max_norm(rhs - rhs.adjoint()) > kRhsHermTol * scale)
            throw Error("amp_pt_corrections: non-Hermitian right-hand side at order " +
                        std::to_string(j));
        rhs = hermitize(rhs);

        series.corrections.push_back(use_triangular_solver ? z0_solve_triangular(zeta0, rhs)
                                                           : z0_solve(system, rhs));
    }
    return series;
}

Matrix reconstruct_density(const AmplitudeSeries& series, double alpha) {
    if (series.corrections.empty())
        throw std::invalid_argument("reconstruct_density: empty series");
    Matrix zeta = series.corrections[0];
    double power = 1.0;
    for (std::size_t j = 1; j < series.corrections.size(); ++j) {
        power *= alpha;
        zeta += power * series.corrections[j];
    }
    Matrix rho = hermitize(zeta * zeta.adjoint());
    const double tr = rho.trace().real();
    if (!(tr > 1e-300))
        throw Error("reconstruct_density: trace of zeta zeta^dag vanished");
    rho /= tr;
    return series.pivot.empty() ? rho : undo_pivot(rho, series.pivot);
}

double default_reg_c(const Matrix& rho0) {
    return min_eigenvalue_hermitian(rho0) > 1e-8 ? 0.0 : 1e-9;
}

double amp_c_stability(const std::vector<Matrix>& rho_corrections, std::span<const double> cs,
                       double alpha) {
    std::vector<Matrix> states;
    states.reserve(cs.size());
    for (double c : cs)
        states.push_back(reconstruct_density(amp_pt_corrections(rho_corrections, c), alpha));
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t k = i + 1; k < states.size(); ++k)
            worst = std::max(worst, trace_norm(states[i] - states[k]));
    return worst;
}

}  // namespace lpt
