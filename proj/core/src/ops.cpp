#include "lbforge/ops.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace lbforge::ops {

namespace {

// Mixed-radix digits of a flat product-basis index, factor 0 most significant.
void decompose(Eigen::Index flat, const std::vector<Eigen::Index>& dims,
               std::vector<Eigen::Index>& digits) {
    for (std::size_t f = dims.size(); f-- > 0;) {
        digits[f] = flat % dims[f];
        flat /= dims[f];
    }
}

Eigen::Index recompose(const std::vector<Eigen::Index>& digits,
                       const std::vector<Eigen::Index>& dims) {
    Eigen::Index flat = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) flat = flat * dims[f] + digits[f];
    return flat;
}

std::vector<bool> subset_mask(const std::vector<std::size_t>& subset, std::size_t n_factors,
                              const char* who) {
    std::vector<bool> mask(n_factors, false);
    for (std::size_t s : subset) {
        if (s >= n_factors) throw std::out_of_range(std::string(who) + ": factor index out of range");
        mask[s] = true;
    }
    return mask;
}

}  // namespace

// --------------------------- elementary -------------------------------------

ComplexMatrix identity(Eigen::Index d) {
    if (d < 1) throw std::invalid_argument("identity: dimension must be >= 1");
    return ComplexMatrix::Identity(d, d);
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, -kImag,
         kImag, 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;  // |0><1|
    return m;
}

ComplexMatrix sigma_plus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 0) = 1.0;  // |1><0|
    return m;
}

ComplexMatrix boson_annihilate(Eigen::Index n_cut) {
    if (n_cut < 1) throw std::invalid_argument("boson_annihilate: n_cut must be >= 1");
    ComplexMatrix m = ComplexMatrix::Zero(n_cut + 1, n_cut + 1);
    for (Eigen::Index n = 1; n <= n_cut; ++n) {
        m(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return m;
}

// --------------------------- Kronecker construction -------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out = Eigen::kroneckerProduct(a, b);
    return out;
}

ComplexMatrix embed_local(const ComplexMatrix& op, std::size_t site, const SpaceShape& shape) {
    if (site >= shape.n_factors()) throw std::out_of_range("embed_local: site out of range");
    require_dim(op, shape.factor_dim(site), "embed_local");

    ComplexMatrix out = (site == 0) ? op : ComplexMatrix(identity(shape.factor_dim(0)));
    for (std::size_t f = 1; f < shape.n_factors(); ++f) {
        out = kron(out, (f == site) ? op : ComplexMatrix(identity(shape.factor_dim(f))));
    }
    return out;
}

ComplexMatrix jordan_wigner(std::size_t site, std::size_t n_modes) {
    if (site >= n_modes) throw std::out_of_range("jordan_wigner: site out of range");
    ComplexMatrix out = (site == 0) ? sigma_minus() : pauli_z();
    for (std::size_t f = 1; f < n_modes; ++f) {
        if (f < site)       out = kron(out, pauli_z());
        else if (f == site) out = kron(out, sigma_minus());
        else                out = kron(out, identity(2));
    }
    return out;
}

// --------------------------- subsystem reshuffles ----------------------------

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const SpaceShape& shape,
                                const std::vector<std::size_t>& subsystem) {
    const Eigen::Index d = shape.total_dim();
    require_dim(rho, d, "partial_transpose");
    if (subsystem.empty()) throw std::invalid_argument("partial_transpose: empty subsystem");
    const auto mask = subset_mask(subsystem, shape.n_factors(), "partial_transpose");
    if (std::all_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
        throw std::invalid_argument("partial_transpose: subsystem must be a proper subset");
    }

    const auto& dims = shape.factor_dims();
    std::vector<Eigen::Index> row(dims.size()), col(dims.size());
    ComplexMatrix out(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        decompose(i, dims, row);
        for (Eigen::Index j = 0; j < d; ++j) {
            decompose(j, dims, col);
            auto r = row, c = col;
            for (std::size_t f = 0; f < dims.size(); ++f) {
                if (mask[f]) std::swap(r[f], c[f]);
            }
            out(recompose(r, dims), recompose(c, dims)) = rho(i, j);
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const SpaceShape& shape,
                            const std::vector<std::size_t>& keep) {
    const Eigen::Index d = shape.total_dim();
    require_dim(rho, d, "partial_trace");
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    const auto mask = subset_mask(keep, shape.n_factors(), "partial_trace");

    const auto& dims = shape.factor_dims();
    std::vector<std::size_t> kept, traced;
    for (std::size_t f = 0; f < dims.size(); ++f) (mask[f] ? kept : traced).push_back(f);

    Eigen::Index d_keep = 1, d_traced = 1;
    for (std::size_t f : kept) d_keep *= dims[f];
    for (std::size_t f : traced) d_traced *= dims[f];

    std::vector<Eigen::Index> keep_dims, traced_dims;
    for (std::size_t f : kept) keep_dims.push_back(dims[f]);
    for (std::size_t f : traced) traced_dims.push_back(dims[f]);

    std::vector<Eigen::Index> full(dims.size()), ik(kept.size()), jk(kept.size()), t(traced.size());
    ComplexMatrix out = ComplexMatrix::Zero(d_keep, d_keep);
    for (Eigen::Index i = 0; i < d_keep; ++i) {
        decompose(i, keep_dims, ik);
        for (Eigen::Index j = 0; j < d_keep; ++j) {
            decompose(j, keep_dims, jk);
            Complex sum = 0.0;
            for (Eigen::Index tr = 0; tr < d_traced; ++tr) {
                decompose(tr, traced_dims, t);
                for (std::size_t f = 0; f < kept.size(); ++f) full[kept[f]] = ik[f];
                for (std::size_t f = 0; f < traced.size(); ++f) full[traced[f]] = t[f];
                const Eigen::Index r = recompose(full, dims);
                for (std::size_t f = 0; f < kept.size(); ++f) full[kept[f]] = jk[f];
                const Eigen::Index c = recompose(full, dims);
                sum += rho(r, c);
            }
            out(i, j) = sum;
        }
    }
    return out;
}

}  // namespace lbforge::ops
