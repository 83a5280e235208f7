// types.hpp — Dense complex carriers, tensor-factor shapes, small matrix predicates

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

// Ordered list of tensor-factor dimensions. Factor 0 is the most significant
// index in the Kronecker ordering: a product-basis state |i_0 i_1 ... i_{n-1}>
// has flat index ((i_0 * d_1 + i_1) * d_2 + i_2) * ...
class SpaceShape {
public:
    SpaceShape() = default;

    explicit SpaceShape(std::vector<Eigen::Index> dims) : factor_dims_(std::move(dims)) {
        if (factor_dims_.empty()) {
            throw std::invalid_argument("SpaceShape: at least one factor required");
        }
        for (Eigen::Index d : factor_dims_) {
            if (d < 2) throw std::invalid_argument("SpaceShape: every factor dimension must be >= 2");
        }
    }

    static SpaceShape qubits(std::size_t n) {
        return SpaceShape(std::vector<Eigen::Index>(n, 2));
    }

    static SpaceShape single(Eigen::Index dim) {
        return SpaceShape(std::vector<Eigen::Index>{dim});
    }

    const std::vector<Eigen::Index>& factor_dims() const { return factor_dims_; }
    std::size_t n_factors() const { return factor_dims_.size(); }
    Eigen::Index factor_dim(std::size_t i) const { return factor_dims_.at(i); }

    Eigen::Index total_dim() const {
        return std::accumulate(factor_dims_.begin(), factor_dims_.end(),
                               Eigen::Index{1}, std::multiplies<>());
    }

    bool operator==(const SpaceShape& other) const = default;

private:
    std::vector<Eigen::Index> factor_dims_;
};

// --------------------------- small predicates -------------------------------

// Runtime numerical failure (divergence, guard violation); distinct from the
// std::invalid_argument / std::out_of_range used for malformed inputs.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

inline ComplexMatrix hermitize(const ComplexMatrix& a) {
    return 0.5 * (a + a.adjoint());
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = 1e-10) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_square(const ComplexMatrix& a) { return a.rows() == a.cols(); }

inline double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

inline void require_square(const ComplexMatrix& a, const std::string& who) {
    if (!is_square(a)) {
        throw std::invalid_argument(who + ": matrix must be square, got " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

inline void require_dim(const ComplexMatrix& a, Eigen::Index d, const std::string& who) {
    require_square(a, who);
    if (a.rows() != d) {
        throw std::invalid_argument(who + ": expected dimension " + std::to_string(d) +
                                    ", got " + std::to_string(a.rows()));
    }
}

}  // namespace lbforge
