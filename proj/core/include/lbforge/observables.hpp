// observables.hpp — Steady-state figures of merit: entanglement negativity,
// von Neumann entropy, Uhlmann fidelity, trace distance, purity.
#pragma once

#include <vector>

#include "lbforge/types.hpp"

namespace lbforge {

// A cut of the tensor factorization: part_a holds the factor indices that are
// transposed (negativity) or kept (reduced states). Must be a nonempty proper
// subset of the factors.
struct Bipartition {
    SpaceShape shape;
    std::vector<std::size_t> part_a;
};

// First ceil(n/2) sites vs the rest, the default cut for spin/fermion chains.
Bipartition chain_half_bipartition(std::size_t n_sites);

// Cavity factor vs all spin factors (factor 0 is the cavity mode).
Bipartition cavity_spin_bipartition(Eigen::Index n_cut, std::size_t n_spins);

// Default cut for a shape: factor {0} when factor 0 is larger than a qubit
// (cavity-style shapes), otherwise the first ceil(n/2) factors.
Bipartition default_bipartition(const SpaceShape& shape);

// N(rho) = (sum_i |lambda_i(rho^Gamma)| - 1) / 2, clamped to >= 0.
double negativity(const ComplexMatrix& rho, const Bipartition& split);

// S(rho) = -sum_i lambda_i ln lambda_i, with 0 ln 0 = 0. Natural log.
// Eigenvalues below -1e-8 throw; values in [-1e-8, 0) are clamped to 0.
double von_neumann_entropy(const ComplexMatrix& rho);

// Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 in [0,1].
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

// Square-root convention Tr sqrt(sqrt(rho) sigma sqrt(rho)), i.e. sqrt(F).
double sqrt_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

// T = ||rho - sigma||_1 / 2 in [0,1].
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

// Tr rho^2 in [1/d, 1].
double purity(const ComplexMatrix& rho);

}  // namespace lbforge
