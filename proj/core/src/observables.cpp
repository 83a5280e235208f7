#include "lbforge/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lbforge/ops.hpp"

namespace lbforge {

namespace {

constexpr double kEigenvalueFloor = -1e-8;

// Eigenvalues of a (nearly) Hermitian matrix, noise floor applied: values in
// [-1e-8, 0) clamp to 0, anything lower throws.
RealVector clamped_spectrum(const ComplexMatrix& a, const char* who) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(a), Eigen::EigenvaluesOnly);
    RealVector lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] < kEigenvalueFloor) {
            throw std::invalid_argument(std::string(who) + ": eigenvalue below -1e-8; not a density matrix");
        }
        lam[i] = std::max(lam[i], 0.0);
    }
    return lam;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a, const char* who) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(a));
    RealVector lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] < kEigenvalueFloor) {
            throw std::invalid_argument(std::string(who) + ": eigenvalue below -1e-8; not a density matrix");
        }
        lam[i] = std::sqrt(std::max(lam[i], 0.0));
    }
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

// --------------------------- default cuts -----------------------------------

Bipartition chain_half_bipartition(std::size_t n_sites) {
    if (n_sites < 2) throw std::invalid_argument("chain_half_bipartition: need at least 2 sites");
    Bipartition split{SpaceShape::qubits(n_sites), {}};
    for (std::size_t i = 0; i < (n_sites + 1) / 2; ++i) split.part_a.push_back(i);
    return split;
}

Bipartition cavity_spin_bipartition(Eigen::Index n_cut, std::size_t n_spins) {
    if (n_spins < 1) throw std::invalid_argument("cavity_spin_bipartition: need at least 1 spin");
    std::vector<Eigen::Index> dims{n_cut + 1};
    dims.insert(dims.end(), n_spins, 2);
    return Bipartition{SpaceShape(std::move(dims)), {0}};
}

Bipartition default_bipartition(const SpaceShape& shape) {
    if (shape.n_factors() < 2) throw std::invalid_argument("default_bipartition: need at least 2 factors");
    if (shape.factor_dim(0) > 2) return Bipartition{shape, {0}};
    Bipartition split{shape, {}};
    for (std::size_t i = 0; i < (shape.n_factors() + 1) / 2; ++i) split.part_a.push_back(i);
    return split;
}

// --------------------------- measures ---------------------------------------

double negativity(const ComplexMatrix& rho, const Bipartition& split) {
    const ComplexMatrix pt = ops::partial_transpose(rho, split.shape, split.part_a);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(pt), Eigen::EigenvaluesOnly);
    const double trace_norm = es.eigenvalues().cwiseAbs().sum();
    return std::max(0.5 * (trace_norm - 1.0), 0.0);
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    require_square(rho, "von_neumann_entropy");
    const RealVector lam = clamped_spectrum(rho, "von_neumann_entropy");
    double s = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] > 0.0) s -= lam[i] * std::log(lam[i]);
    }
    return s;
}

double sqrt_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    require_square(rho, "fidelity");
    require_dim(sigma, rho.rows(), "fidelity");
    const ComplexMatrix root = matrix_sqrt_psd(rho, "fidelity");
    const ComplexMatrix inner = root * sigma * root;
    const RealVector lam = clamped_spectrum(inner, "fidelity");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) sum += std::sqrt(lam[i]);
    return std::clamp(sum, 0.0, 1.0);
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    const double f = sqrt_fidelity(rho, sigma);
    return f * f;
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    require_square(rho, "trace_distance");
    require_dim(sigma, rho.rows(), "trace_distance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(rho - sigma), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double purity(const ComplexMatrix& rho) {
    require_square(rho, "purity");
    return rho.squaredNorm();
}

}  // namespace lbforge
