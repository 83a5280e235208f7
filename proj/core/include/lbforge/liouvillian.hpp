// liouvillian.hpp — GKSL generator: dense superoperator assembly under the
// column-stacking convention, plus matrix-free direct and adjoint actions.
#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "lbforge/types.hpp"

namespace lbforge {

// One dissipative channel: rate gamma_k >= 0 and jump operator C_k.
struct LindbladChannel {
    double rate = 0.0;
    ComplexMatrix jump;
};

// Hamiltonian + channels on a fixed tensor factorization. The constructor
// validates once so downstream code can assume a well-formed generator.
class LindbladSystem {
public:
    LindbladSystem(ComplexMatrix hamiltonian, std::vector<LindbladChannel> channels,
                   SpaceShape shape);

    const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
    const std::vector<LindbladChannel>& channels() const { return channels_; }
    const SpaceShape& shape() const { return shape_; }
    Eigen::Index dim() const { return hamiltonian_.rows(); }

private:
    ComplexMatrix hamiltonian_;
    std::vector<LindbladChannel> channels_;
    SpaceShape shape_;
};

// How a density matrix maps onto the flat vector the superoperator acts on.
enum class VecConvention { ColumnStacking };

// Dense d^2 x d^2 matrix representation of the generator. kron_terms is the
// Kronecker-sum decomposition matrix = sum_k P_k (x) Q_k straight from the
// GKSL form; scalars are folded into the P factors.
struct SuperOperator {
    ComplexMatrix matrix;
    Eigen::Index hilbert_dim = 0;
    VecConvention convention = VecConvention::ColumnStacking;
    std::vector<std::pair<ComplexMatrix, ComplexMatrix>> kron_terms;
};

// vec / unvec under column stacking: vec(rho) concatenates the columns of rho.
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim);

// Schroedinger-picture action: L(rho) = -i[H,rho] + sum_k gamma_k D[C_k](rho).
ComplexMatrix apply_rhs(const LindbladSystem& system, const ComplexMatrix& rho);

// Heisenberg-picture (adjoint) action on an observable:
// Ld(sigma) = +i[H,sigma] + sum_k gamma_k (Cd sigma C - 1/2 {Cd C, sigma}).
ComplexMatrix apply_adjoint_rhs(const LindbladSystem& system, const ComplexMatrix& sigma);

// Materialize L as a dense matrix. Refuses dim > 128 before allocating.
SuperOperator build_liouvillian(const LindbladSystem& system);

// Same operator in sparse form (column stacking). Lattice generators have
// O(d) nonzeros per row, so iterative solvers get O(nnz) applies out of this
// where the dense matrix would cost O(d^4).
Eigen::SparseMatrix<Complex> build_sparse_liouvillian(const LindbladSystem& system);

// Matrix-free applier for solvers that only need L and Ld actions. Lattice
// Hamiltonians and embedded jump operators are mostly zeros, so the operators
// are held in sparse form: one apply costs O(nnz * d) instead of O(d^3).
// norm_bound() estimates ||L||_2 by power iteration on the composed map
// Ld o L from a deterministic start.
class LiouvillianAction {
public:
    explicit LiouvillianAction(const LindbladSystem& system);

    ComplexMatrix rhs(const ComplexMatrix& rho) const;
    ComplexMatrix adjoint_rhs(const ComplexMatrix& sigma) const;
    Eigen::Index dim() const { return hamiltonian_.rows(); }
    double norm_bound() const;

private:
    using Sparse = Eigen::SparseMatrix<Complex>;
    Sparse hamiltonian_;
    std::vector<double> rates_;
    std::vector<Sparse> jumps_;
    std::vector<Sparse> jump_dags_;
    Sparse cdc_sum_;  // sum_k gamma_k Cd_k C_k (the anticommutator is linear in it)
    mutable double cached_norm_ = -1.0;
};

}  // namespace lbforge
