// steady_state.hpp — NESS solvers: Liouvillian nullspace extraction, projected
// first-order minimization of ||rho_dot||_F over density matrices, and an RK4
// propagation oracle for cross-validation.
#pragma once

#include <optional>
#include <string>

#include "lbforge/liouvillian.hpp"
#include "lbforge/types.hpp"

namespace lbforge {

enum class SteadyMethod { nullspace, constrained, propagation };

std::string to_string(SteadyMethod method);

struct SolverOptions {
    double tol = 1e-9;        // stop when ||L(rho)||_F < tol
    double step_tol = 1e-12;  // stop when the projected step shrinks below this
    int max_iter = 50000;
    // Warm start; defaults to the maximally mixed state I/d.
    std::optional<ComplexMatrix> initial_state;
};

struct SteadyStateResult {
    ComplexMatrix rho;          // unit trace, PSD up to solver tolerance
    double residual = 0.0;      // ||L vec(rho)||_2 = ||rho_dot||_F
    SteadyMethod method = SteadyMethod::nullspace;
    double spectral_gap = 0.0;  // |Re lambda_1| of the slowest nonzero mode; 0 when not computed
    bool degenerate = false;    // second Liouvillian eigenvalue below the degeneracy tolerance
    bool converged = false;
    int iterations = 0;
};

// Full eigendecomposition of the dense Liouvillian; returns the eigenvector of
// smallest eigenvalue modulus, Hermitized and trace-normalized. A degenerate
// steady space sets the flag, emits a warning, and returns the convex
// representative closest to I/d within the near-null span.
SteadyStateResult solve_nullspace(const SuperOperator& sop);

// Projected first-order minimization of ||L(rho)||_F^2 over the density-matrix
// set {rho >= 0, Tr rho = 1, rho = rho†}: gradient step, then exact projection
// (Hermitize, eigendecompose, project the spectrum onto the probability
// simplex, reconstruct), with monotone Nesterov acceleration. The objective
// never increases across iterations. The dense overload reads the
// superoperator matrix; the system overload applies the generator in sparse
// form and is the one to use inside optimization loops.
SteadyStateResult solve_constrained(const SuperOperator& sop, const SolverOptions& opts = {});
SteadyStateResult solve_constrained(const LindbladSystem& system, const SolverOptions& opts = {});

// Fixed-step RK4 integration of the master equation up to t_final. Guards:
// throws NumericalError if trace drift or spectrum negativity exceeds 1e-6
// (both signal dt too large). The two-argument form picks
// dt = min(0.01, 0.1 / ||H||_2).
ComplexMatrix propagate(const LindbladSystem& system, const ComplexMatrix& rho0, double t_final,
                        double dt);
ComplexMatrix propagate(const LindbladSystem& system, const ComplexMatrix& rho0, double t_final);
double default_dt(const LindbladSystem& system);

// ||L vec(rho)||_2, the Frobenius norm of the GKSL right-hand side.
double residual(const SuperOperator& sop, const ComplexMatrix& rho);
double residual(const LindbladSystem& system, const ComplexMatrix& rho);

// Euclidean projection onto the probability simplex {p >= 0, sum p = 1}.
RealVector simplex_project(const RealVector& y);

// Exact projection onto the density-matrix set; idempotent on valid states.
ComplexMatrix project_to_density_matrix(const ComplexMatrix& a);

}  // namespace lbforge
