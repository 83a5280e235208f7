#include "lbforge/liouvillian.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "lbforge/ops.hpp"

namespace lbforge {

namespace {
constexpr Eigen::Index kMaxDenseDim = 128;   // d^2 x d^2 dense assembly cap
constexpr double kHermitianTol = 1e-10;
}  // namespace

// --------------------------- LindbladSystem ---------------------------------

LindbladSystem::LindbladSystem(ComplexMatrix hamiltonian, std::vector<LindbladChannel> channels,
                               SpaceShape shape)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)), shape_(std::move(shape)) {
    require_square(hamiltonian_, "LindbladSystem");
    if (hamiltonian_.rows() != shape_.total_dim()) {
        throw std::invalid_argument("LindbladSystem: Hamiltonian dimension does not match shape");
    }
    if (!is_hermitian(hamiltonian_, kHermitianTol)) {
        throw std::invalid_argument("LindbladSystem: Hamiltonian is not Hermitian");
    }
    for (const auto& ch : channels_) {
        if (!(ch.rate >= 0.0)) {
            throw std::invalid_argument("LindbladSystem: channel rate must be >= 0");
        }
        require_dim(ch.jump, hamiltonian_.rows(), "LindbladSystem channel");
    }
}

// --------------------------- vec / unvec ------------------------------------

ComplexVector vectorize(const ComplexMatrix& rho) {
    require_square(rho, "vectorize");
    // Eigen matrices are column-major, so a flat view is exactly column stacking.
    return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim) {
    if (v.size() != dim * dim) throw std::invalid_argument("unvectorize: size is not dim^2");
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

// --------------------------- direct and adjoint action ----------------------

ComplexMatrix apply_rhs(const LindbladSystem& system, const ComplexMatrix& rho) {
    require_dim(rho, system.dim(), "apply_rhs");
    const ComplexMatrix& h = system.hamiltonian();
    ComplexMatrix out = -kImag * (h * rho - rho * h);
    for (const auto& ch : system.channels()) {
        const ComplexMatrix& c = ch.jump;
        const ComplexMatrix cdc = c.adjoint() * c;
        out += ch.rate * (c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc));
    }
    return out;
}

ComplexMatrix apply_adjoint_rhs(const LindbladSystem& system, const ComplexMatrix& sigma) {
    require_dim(sigma, system.dim(), "apply_adjoint_rhs");
    const ComplexMatrix& h = system.hamiltonian();
    ComplexMatrix out = kImag * (h * sigma - sigma * h);
    for (const auto& ch : system.channels()) {
        const ComplexMatrix& c = ch.jump;
        const ComplexMatrix cdc = c.adjoint() * c;
        out += ch.rate * (c.adjoint() * sigma * c - 0.5 * (cdc * sigma + sigma * cdc));
    }
    return out;
}

// --------------------------- dense assembly ---------------------------------

SuperOperator build_liouvillian(const LindbladSystem& system) {
    const Eigen::Index d = system.dim();
    if (d > kMaxDenseDim) {
        throw std::invalid_argument("build_liouvillian: dimension exceeds dense cap of 128");
    }
    const ComplexMatrix& h = system.hamiltonian();
    const ComplexMatrix id = ops::identity(d);

    // Column stacking sends A rho B to (B^T kron A) vec(rho).
    SuperOperator sop;
    sop.hilbert_dim = d;
    sop.kron_terms.emplace_back(-kImag * id, h);
    sop.kron_terms.emplace_back(kImag * h.transpose(), id);
    for (const auto& ch : system.channels()) {
        const ComplexMatrix& c = ch.jump;
        const ComplexMatrix cdc = c.adjoint() * c;
        sop.kron_terms.emplace_back(ch.rate * c.conjugate(), c);
        sop.kron_terms.emplace_back(-0.5 * ch.rate * id, cdc);
        sop.kron_terms.emplace_back(-0.5 * ch.rate * cdc.transpose(), id);
    }
    sop.matrix = ComplexMatrix::Zero(d * d, d * d);
    for (const auto& [p, q] : sop.kron_terms) sop.matrix += ops::kron(p, q);
    return sop;
}

Eigen::SparseMatrix<Complex> build_sparse_liouvillian(const LindbladSystem& system) {
    using Sparse = Eigen::SparseMatrix<Complex>;
    const Eigen::Index d = system.dim();
    Sparse id(d, d);
    id.setIdentity();

    const Sparse h = system.hamiltonian().sparseView();
    const Sparse ht = Sparse(h.transpose());

    // Same column-stacking assembly as the dense builder, term by term.
    Sparse l = Sparse(Eigen::kroneckerProduct(id, h)) * (-kImag)
             + Sparse(Eigen::kroneckerProduct(ht, id)) * kImag;
    for (const auto& ch : system.channels()) {
        const Sparse c = ch.jump.sparseView();
        const Sparse c_conj = ch.jump.conjugate().sparseView();
        const Sparse cdc = ComplexMatrix(ch.jump.adjoint() * ch.jump).sparseView();
        const Sparse cdc_t = Sparse(cdc.transpose());
        l += Sparse(Eigen::kroneckerProduct(c_conj, c)) * Complex(ch.rate)
           + Sparse(Eigen::kroneckerProduct(id, cdc)) * Complex(-0.5 * ch.rate)
           + Sparse(Eigen::kroneckerProduct(cdc_t, id)) * Complex(-0.5 * ch.rate);
    }
    l.makeCompressed();
    return l;
}

// --------------------------- matrix-free action ------------------------------

LiouvillianAction::LiouvillianAction(const LindbladSystem& system) {
    const Eigen::Index d = system.dim();
    hamiltonian_ = system.hamiltonian().sparseView();
    ComplexMatrix cdc_sum = ComplexMatrix::Zero(d, d);
    for (const auto& ch : system.channels()) {
        rates_.push_back(ch.rate);
        jumps_.emplace_back(ch.jump.sparseView());
        jump_dags_.emplace_back(ComplexMatrix(ch.jump.adjoint()).sparseView());
        cdc_sum += ch.rate * (ch.jump.adjoint() * ch.jump);
    }
    cdc_sum_ = cdc_sum.sparseView();
}

ComplexMatrix LiouvillianAction::rhs(const ComplexMatrix& rho) const {
    ComplexMatrix out = hamiltonian_ * rho;
    out.noalias() -= rho * hamiltonian_;
    out *= -kImag;
    ComplexMatrix tmp;
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        tmp.noalias() = jumps_[k] * rho;
        out.noalias() += rates_[k] * (tmp * jump_dags_[k]);
    }
    out.noalias() -= 0.5 * (cdc_sum_ * rho);
    out.noalias() -= 0.5 * (rho * cdc_sum_);
    return out;
}

ComplexMatrix LiouvillianAction::adjoint_rhs(const ComplexMatrix& sigma) const {
    ComplexMatrix out = hamiltonian_ * sigma;
    out.noalias() -= sigma * hamiltonian_;
    out *= kImag;
    ComplexMatrix tmp;
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        tmp.noalias() = jump_dags_[k] * sigma;
        out.noalias() += rates_[k] * (tmp * jumps_[k]);
    }
    out.noalias() -= 0.5 * (cdc_sum_ * sigma);
    out.noalias() -= 0.5 * (sigma * cdc_sum_);
    return out;
}

double LiouvillianAction::norm_bound() const {
    if (cached_norm_ >= 0.0) return cached_norm_;
    const Eigen::Index d = dim();
    // Power iteration on Ld o L from a fixed dense start; the iterate converges
    // to ||L||_2^2, so take the square root at the end.
    ComplexMatrix x(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            x(i, j) = Complex(1.0 + static_cast<double>(i), 0.5 + static_cast<double>(j));
        }
    }
    x /= x.norm();
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
        ComplexMatrix y = adjoint_rhs(rhs(x));
        const double n = y.norm();
        if (n == 0.0) { lambda = 0.0; break; }
        lambda = n;
        x = y / n;
    }
    cached_norm_ = std::sqrt(lambda);
    return cached_norm_;
}

}  // namespace lbforge
