#include "lbforge/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>

#ifdef LBFORGE_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

#include "lbforge/ops.hpp"

namespace lbforge {

namespace {

constexpr double kDegeneracyTol = 1e-8;

void require_superoperator(const SuperOperator& sop, const char* who) {
    const Eigen::Index d = sop.hilbert_dim;
    if (d < 2 || sop.matrix.rows() != d * d || sop.matrix.cols() != d * d) {
        throw std::invalid_argument(std::string(who) + ": malformed superoperator");
    }
}

// Hermitian eigendecomposition, eigenvalues ascending. LAPACK's zheev when
// available (it is the per-iteration cost of the constrained solver), Eigen
// otherwise.
void hermitian_eig(ComplexMatrix a, RealVector& w, ComplexMatrix& v, const char* who) {
#ifdef LBFORGE_HAVE_LAPACKE
    const lapack_int n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
    if (info != 0) throw NumericalError(std::string(who) + ": eigendecomposition failed");
    v = std::move(a);
#else
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
    if (es.info() != Eigen::Success) {
        throw NumericalError(std::string(who) + ": eigendecomposition failed");
    }
    w = es.eigenvalues();
    v = es.eigenvectors();
#endif
}

// Full non-Hermitian spectrum with right eigenvectors.
void general_eig(ComplexMatrix a, ComplexVector& w, ComplexMatrix& vr, const char* who) {
#ifdef LBFORGE_HAVE_LAPACKE
    const lapack_int n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    vr.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, w.data(),
                                          nullptr, 1, vr.data(), n);
    if (info != 0) throw NumericalError(std::string(who) + ": eigendecomposition failed");
#else
    Eigen::ComplexEigenSolver<ComplexMatrix> es(a);
    if (es.info() != Eigen::Success) {
        throw NumericalError(std::string(who) + ": eigendecomposition failed");
    }
    w = es.eigenvalues();
    vr = es.eigenvectors();
#endif
}

void validate_density_input(const ComplexMatrix& rho, Eigen::Index d, const char* who) {
    require_dim(rho, d, who);
    if (!is_hermitian(rho, 1e-8)) throw std::invalid_argument(std::string(who) + ": state is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-8) {
        throw std::invalid_argument(std::string(who) + ": state trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(rho), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) {
        throw std::invalid_argument(std::string(who) + ": state has a negative eigenvalue");
    }
}

}  // namespace

std::string to_string(SteadyMethod method) {
    switch (method) {
        case SteadyMethod::nullspace:   return "nullspace";
        case SteadyMethod::constrained: return "constrained";
        case SteadyMethod::propagation: return "propagation";
    }
    throw std::invalid_argument("to_string: unknown SteadyMethod");
}

// --------------------------- projections ------------------------------------

RealVector simplex_project(const RealVector& y) {
    const Eigen::Index n = y.size();
    if (n == 0) throw std::invalid_argument("simplex_project: empty vector");
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double tau = u[0] - 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cumulative += u[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (u[j] - candidate > 0.0) tau = candidate;
    }
    RealVector p(n);
    for (Eigen::Index i = 0; i < n; ++i) p[i] = std::max(y[i] - tau, 0.0);
    return p;
}

ComplexMatrix project_to_density_matrix(const ComplexMatrix& a) {
    require_square(a, "project_to_density_matrix");
    RealVector w;
    ComplexMatrix v;
    hermitian_eig(hermitize(a), w, v, "project_to_density_matrix");
    const RealVector p = simplex_project(w);
    // The simplex projection zeroes trailing weight; rebuild from the
    // surviving eigenvectors only (eigenvalues ascend, so they sit at the end).
    Eigen::Index first = p.size();
    while (first > 0 && p[first - 1] > 0.0) --first;
    const auto cols = v.rightCols(p.size() - first);
    return cols * p.tail(p.size() - first).asDiagonal() * cols.adjoint();
}

// --------------------------- residuals --------------------------------------

double residual(const SuperOperator& sop, const ComplexMatrix& rho) {
    require_superoperator(sop, "residual");
    require_dim(rho, sop.hilbert_dim, "residual");
    return (sop.matrix * vectorize(rho)).norm();
}

double residual(const LindbladSystem& system, const ComplexMatrix& rho) {
    return apply_rhs(system, rho).norm();
}

// --------------------------- nullspace solver --------------------------------

SteadyStateResult solve_nullspace(const SuperOperator& sop) {
    require_superoperator(sop, "solve_nullspace");
    const Eigen::Index d = sop.hilbert_dim;

    ComplexVector evals;
    ComplexMatrix evecs;
    general_eig(sop.matrix, evals, evecs, "solve_nullspace");
    const Eigen::Index n = evals.size();

    Eigen::Index i_min = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (std::abs(evals[i]) < std::abs(evals[i_min])) i_min = i;
    }
    double second_smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i != i_min) second_smallest = std::min(second_smallest, std::abs(evals[i]));
    }

    SteadyStateResult result;
    result.method = SteadyMethod::nullspace;
    result.degenerate = second_smallest < kDegeneracyTol;
    result.converged = true;

    // Slowest decaying mode among the nonzero spectrum.
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(evals[i]) >= kDegeneracyTol) gap = std::min(gap, std::abs(evals[i].real()));
    }
    result.spectral_gap = std::isfinite(gap) ? gap : 0.0;

    const ComplexMatrix rho_raw = unvectorize(evecs.col(i_min), d);
    const Complex tr = rho_raw.trace();

    if (!result.degenerate && std::abs(tr) > 1e-10) {
        ComplexMatrix rho = hermitize(rho_raw / tr);
        rho /= rho.trace().real();
        result.rho = std::move(rho);
    } else {
        // Degenerate (or traceless-vector) steady space: any convex combination
        // is stationary. Return the representative nearest I/d, projected back
        // onto the density-matrix set.
        std::cerr << "solve_nullspace: degenerate steady space; returning convex representative\n";
        result.degenerate = true;
        std::vector<Eigen::Index> null_idx;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(evals[i]) < kDegeneracyTol) null_idx.push_back(i);
        }
        if (null_idx.empty()) null_idx.push_back(i_min);
        ComplexMatrix basis(n, static_cast<Eigen::Index>(null_idx.size()));
        for (std::size_t k = 0; k < null_idx.size(); ++k) basis.col(k) = evecs.col(null_idx[k]);
        Eigen::HouseholderQR<ComplexMatrix> qr(basis);
        const ComplexMatrix q = ComplexMatrix(qr.householderQ()).leftCols(basis.cols());
        const ComplexVector target = vectorize(ComplexMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d)));
        const ComplexVector projected = q * (q.adjoint() * target);
        result.rho = project_to_density_matrix(unvectorize(projected, d));
    }

    result.residual = residual(sop, result.rho);
    return result;
}

// --------------------------- constrained solver ------------------------------

namespace {

// Everything the projected-gradient loop needs, independent of whether the
// Liouvillian is dense or applied matrix-free.
struct GeneratorAction {
    std::function<ComplexMatrix(const ComplexMatrix&)> rhs;
    std::function<ComplexMatrix(const ComplexMatrix&)> adjoint_rhs;
    Eigen::Index dim = 0;
    double norm2 = 0.0;  // ||L||_2 estimate
};

// tr(a† b) = sum_ij conj(a_ij) b_ij: an elementwise dot, not a matrix product.
double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.reshaped().dot(b.reshaped()).real();
}

// ||L||_2 by power iteration on Ld o L, matching the matrix-free path.
double estimate_norm2(const GeneratorAction& act) {
    const Eigen::Index d = act.dim;
    ComplexMatrix x(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            x(i, j) = Complex(1.0 + static_cast<double>(i), 0.5 + static_cast<double>(j));
        }
    }
    x /= x.norm();
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
        ComplexMatrix y = act.adjoint_rhs(act.rhs(x));
        const double nrm = y.norm();
        if (nrm == 0.0) return 0.0;
        lambda = nrm;
        x = y / nrm;
    }
    return std::sqrt(lambda);
}

SteadyStateResult constrained_core(const GeneratorAction& act, const SolverOptions& opts) {
    if (opts.tol <= 0.0 || opts.step_tol <= 0.0 || opts.max_iter < 1) {
        throw std::invalid_argument("solve_constrained: options out of range");
    }
    const Eigen::Index d = act.dim;

    SteadyStateResult result;
    result.method = SteadyMethod::constrained;

    ComplexMatrix x;
    if (opts.initial_state) {
        require_dim(*opts.initial_state, d, "solve_constrained initial_state");
        x = project_to_density_matrix(*opts.initial_state);
    } else {
        x = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    }

    ComplexMatrix lx = act.rhs(x);
    double fx = lx.squaredNorm();
    if (std::sqrt(fx) < opts.tol) {
        result.rho = std::move(x);
        result.residual = std::sqrt(fx);
        result.converged = true;
        return result;
    }

    const double alpha0 = (act.norm2 > 0.0) ? 1.0 / (act.norm2 * act.norm2) : 1.0;

    // Monotone accelerated projected gradient (MFISTA with gradient restart).
    // Each iteration takes a gradient step at the extrapolated point y, then
    // projects exactly onto the density-matrix set. The step is found by
    // backtracking from the 1/||L||_2^2 estimate and persists; accepting z
    // only under
    //   f(z) <= f(y) + <g(y), z-y> + ||z-y||^2 / (2 alpha)
    // plus the monotone x-update keeps the objective non-increasing.
    double alpha = alpha0;
    ComplexMatrix y = x;
    ComplexMatrix x_prev = x;
    ComplexMatrix z_prev = x;
    double t = 1.0;
    bool y_is_x = true;  // y coincides with the iterate (no live momentum)
    int iter = 0;
    bool converged = false;
    while (iter < opts.max_iter) {
        ++iter;
        const ComplexMatrix ly = act.rhs(y);
        const double fy = ly.squaredNorm();
        const ComplexMatrix grad_y = hermitize(2.0 * act.adjoint_rhs(ly));
        const bool plain_step = y_is_x;

        ComplexMatrix z;
        double fz = fy;
        double step_norm = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            z = project_to_density_matrix(y - alpha * grad_y);
            const ComplexMatrix s = z - y;
            step_norm = s.norm();
            fz = act.rhs(z).squaredNorm();
            const double model = real_inner(grad_y, s) + step_norm * step_norm / (2.0 * alpha);
            if (fz <= fy + model + 1e-16) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // No admissible step even at a vanishing size: numerically stationary.
            converged = std::sqrt(fx) < 10.0 * opts.tol;
            break;
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        ComplexMatrix x_new = (fz <= fx) ? z : x;
        const double fx_new = (fz <= fx) ? fz : fx;

        // Restart the momentum when it points against the descent direction.
        const double uphill = real_inner(y - z, z - z_prev);
        if (uphill > 0.0) {
            y = x_new;
            t = 1.0;
            y_is_x = true;
        } else {
            y = x_new + (t / t_next) * (z - x_new) + ((t - 1.0) / t_next) * (x_new - x_prev);
            t = t_next;
            y_is_x = false;
        }
        x_prev = std::move(x);
        x = std::move(x_new);
        fx = fx_new;
        z_prev = std::move(z);

        if (std::sqrt(fx) < opts.tol) {
            converged = true;
            break;
        }
        if (plain_step && step_norm < opts.step_tol) {
            // An unaccelerated projected-gradient step barely moved.
            converged = true;
            break;
        }
    }

    result.rho = std::move(x);
    result.residual = std::sqrt(fx);
    result.converged = converged;
    result.iterations = iter;
    return result;
}

}  // namespace

SteadyStateResult solve_constrained(const SuperOperator& sop, const SolverOptions& opts) {
    require_superoperator(sop, "solve_constrained");
    const Eigen::Index d = sop.hilbert_dim;
    const ComplexMatrix adj = sop.matrix.adjoint();
    GeneratorAction act;
    act.dim = d;
    act.rhs = [&sop, d](const ComplexMatrix& rho) {
        return unvectorize(ComplexVector(sop.matrix * vectorize(rho)), d);
    };
    act.adjoint_rhs = [&adj, d](const ComplexMatrix& sigma) {
        return unvectorize(ComplexVector(adj * vectorize(sigma)), d);
    };
    act.norm2 = estimate_norm2(act);
    return constrained_core(act, opts);
}

SteadyStateResult solve_constrained(const LindbladSystem& system, const SolverOptions& opts) {
    // Matvecs against the sparse superoperator beat chained operator products:
    // two O(nnz) applies per gradient instead of a dozen matrix multiplies.
    const Eigen::SparseMatrix<Complex> l = build_sparse_liouvillian(system);
    const Eigen::SparseMatrix<Complex> l_adj = l.adjoint();
    const Eigen::Index d = system.dim();

    auto apply = [d](const Eigen::SparseMatrix<Complex>& m, const ComplexMatrix& x) {
        Eigen::Map<const ComplexVector> v(x.data(), x.size());
        ComplexVector w = m * v;
        return ComplexMatrix(Eigen::Map<const ComplexMatrix>(w.data(), d, d));
    };
    GeneratorAction act;
    act.dim = d;
    act.rhs = [&l, apply](const ComplexMatrix& rho) { return apply(l, rho); };
    act.adjoint_rhs = [&l_adj, apply](const ComplexMatrix& sigma) { return apply(l_adj, sigma); };
    act.norm2 = estimate_norm2(act);
    return constrained_core(act, opts);
}

// --------------------------- propagation oracle ------------------------------

double default_dt(const LindbladSystem& system) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(system.hamiltonian(), Eigen::EigenvaluesOnly);
    const double h_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    return (h_norm > 0.0) ? std::min(0.01, 0.1 / h_norm) : 0.01;
}

ComplexMatrix propagate(const LindbladSystem& system, const ComplexMatrix& rho0, double t_final,
                        double dt) {
    if (dt <= 0.0) throw std::invalid_argument("propagate: dt must be > 0");
    if (t_final < 0.0) throw std::invalid_argument("propagate: t_final must be >= 0");
    validate_density_input(rho0, system.dim(), "propagate");
    if (t_final == 0.0) return rho0;

    const auto n_steps = static_cast<long>(std::ceil(t_final / dt));
    const double h = t_final / static_cast<double>(n_steps);
    LiouvillianAction action(system);

    auto check_spectrum = [](const ComplexMatrix& rho) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(rho), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-6) {
            throw NumericalError("propagate: state developed negativity beyond 1e-6 (dt too large)");
        }
    };

    ComplexMatrix rho = rho0;
    for (long step = 0; step < n_steps; ++step) {
        const ComplexMatrix k1 = action.rhs(rho);
        const ComplexMatrix k2 = action.rhs(rho + (0.5 * h) * k1);
        const ComplexMatrix k3 = action.rhs(rho + (0.5 * h) * k2);
        const ComplexMatrix k4 = action.rhs(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (std::abs(rho.trace() - Complex(1.0)) > 1e-6) {
            throw NumericalError("propagate: trace drift beyond 1e-6 (dt too large)");
        }
        if (step % 200 == 199) check_spectrum(rho);
    }
    check_spectrum(rho);
    return rho;
}

ComplexMatrix propagate(const LindbladSystem& system, const ComplexMatrix& rho0, double t_final) {
    return propagate(system, rho0, t_final, default_dt(system));
}

}  // namespace lbforge
