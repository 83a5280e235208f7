// ops.hpp — Elementary operators, Kronecker embedding, Jordan-Wigner map,
// partial transpose and partial trace on arbitrary tensor factorizations.

#pragma once

#include <cstddef>
#include <vector>

#include "lbforge/types.hpp"

namespace lbforge::ops {

// --------------------------- elementary 2x2 / ladder -------------------------

ComplexMatrix identity(Eigen::Index d);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Basis order is (|0> = ground, |1> = excited): sigma_minus = |0><1|.
ComplexMatrix sigma_minus();
ComplexMatrix sigma_plus();

// Truncated Fock-space annihilator on dimension n_cut + 1, sqrt(n) on the
// first superdiagonal. Requires n_cut >= 1.
ComplexMatrix boson_annihilate(Eigen::Index n_cut);

// --------------------------- Kronecker construction -------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// I (x) ... (x) op (x) ... (x) I with `op` at tensor position `site`.
ComplexMatrix embed_local(const ComplexMatrix& op, std::size_t site, const SpaceShape& shape);

// Fermionic annihilator a_site on a chain of n_modes spin-1/2 factors:
// Z^(site) (x) sigma_minus (x) I^(n_modes-site-1).
ComplexMatrix jordan_wigner(std::size_t site, std::size_t n_modes);

// --------------------------- subsystem reshuffles ----------------------------

// Transpose the factors listed in `subsystem` (nonempty proper subset).
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const SpaceShape& shape,
                                const std::vector<std::size_t>& subsystem);

// Trace out every factor not listed in `keep` (nonempty).
ComplexMatrix partial_trace(const ComplexMatrix& rho, const SpaceShape& shape,
                            const std::vector<std::size_t>& keep);

}  // namespace lbforge::ops
