// support.hpp — Shared test fixtures: seeded random matrices, closeness
// helpers, and a few states used across suites.
#pragma once

#include <random>
#include <utility>

#include "lbforge/types.hpp"

namespace testsupport {

using lbforge::Complex;
using lbforge::ComplexMatrix;
using lbforge::ComplexVector;

// One seed per call site keeps suites independent of test execution order.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline ComplexMatrix random_matrix(Eigen::Index d, std::mt19937_64& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index d, std::mt19937_64& gen) {
    const ComplexMatrix m = random_matrix(d, gen);
    return 0.5 * (m + m.adjoint());
}

// A A† / tr: full-rank almost surely, exactly unit trace.
inline ComplexMatrix random_density(Eigen::Index d, std::mt19937_64& gen) {
    const ComplexMatrix m = random_matrix(d, gen);
    ComplexMatrix rho = m * m.adjoint();
    rho /= rho.trace();
    return rho;
}

inline ComplexMatrix random_pure_density(Eigen::Index d, std::mt19937_64& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexVector psi(d);
    for (Eigen::Index i = 0; i < d; ++i) psi(i) = Complex(dist(gen), dist(gen));
    psi.normalize();
    return psi * psi.adjoint();
}

// Haar-ish unitary via QR of a Gaussian matrix.
inline ComplexMatrix random_unitary(Eigen::Index d, std::mt19937_64& gen) {
    const Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(d, gen));
    ComplexMatrix q = qr.householderQ();
    return q;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// |Phi+><Phi+| on two qubits.
inline ComplexMatrix bell_phi_plus() {
    ComplexVector psi = ComplexVector::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    return psi * psi.adjoint();
}

inline ComplexMatrix basis_projector(Eigen::Index d, Eigen::Index k) {
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    p(k, k) = 1.0;
    return p;
}

inline ComplexMatrix maximally_mixed(Eigen::Index d) {
    return ComplexMatrix::Identity(d, d) / static_cast<double>(d);
}

}  // namespace testsupport
