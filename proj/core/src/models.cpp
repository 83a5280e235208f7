#include "lbforge/models.hpp"

#include <cmath>

#include "lbforge/ops.hpp"

namespace lbforge {

namespace {

std::vector<std::size_t> dissipation_sites(DissipationLayout layout, std::size_t n_sites) {
    if (layout == DissipationLayout::boundary && n_sites > 2) return {0, n_sites - 1};
    std::vector<std::size_t> sites(n_sites);
    for (std::size_t i = 0; i < n_sites; ++i) sites[i] = i;
    return sites;
}

}  // namespace

std::string to_string(DissipationLayout layout) {
    return layout == DissipationLayout::homogeneous ? "homogeneous" : "boundary";
}

DissipationLayout layout_from_string(const std::string& name) {
    if (name == "homogeneous") return DissipationLayout::homogeneous;
    if (name == "boundary") return DissipationLayout::boundary;
    throw std::invalid_argument("layout_from_string: unknown layout '" + name + "'");
}

// --------------------------- TFIM -------------------------------------------

LindbladSystem build_tfim(const TfimParams& p) {
    if (p.n_sites < 2) throw std::invalid_argument("build_tfim: n_sites must be >= 2");
    if (p.gamma < 0.0) throw std::invalid_argument("build_tfim: gamma must be >= 0");
    const SpaceShape shape = SpaceShape::qubits(p.n_sites);
    const Eigen::Index d = shape.total_dim();

    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i + 1 < p.n_sites; ++i) {
        h.noalias() -= p.j_coupling * (ops::embed_local(ops::pauli_z(), i, shape)
                                       * ops::embed_local(ops::pauli_z(), i + 1, shape));
    }
    for (std::size_t j = 0; j < p.n_sites; ++j) {
        h.noalias() -= p.j_coupling * p.g * ops::embed_local(ops::pauli_x(), j, shape);
    }

    std::vector<LindbladChannel> channels;
    if (p.gamma > 0.0) {
        for (std::size_t site : dissipation_sites(p.layout, p.n_sites)) {
            channels.push_back({p.gamma, ops::embed_local(ops::sigma_minus(), site, shape)});
        }
    }
    return LindbladSystem(std::move(h), std::move(channels), shape);
}

// --------------------------- Kitaev chain -----------------------------------

LindbladSystem build_kitaev(const KitaevParams& p) {
    if (p.n_sites < 2) throw std::invalid_argument("build_kitaev: n_sites must be >= 2");
    if (p.delta_abs < 0.0) throw std::invalid_argument("build_kitaev: delta_abs must be >= 0");
    if (p.gamma < 0.0) throw std::invalid_argument("build_kitaev: gamma must be >= 0");
    const SpaceShape shape = SpaceShape::qubits(p.n_sites);
    const Eigen::Index d = shape.total_dim();

    std::vector<ComplexMatrix> a(p.n_sites);
    for (std::size_t j = 0; j < p.n_sites; ++j) a[j] = ops::jordan_wigner(j, p.n_sites);

    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < p.n_sites; ++j) {
        h.noalias() -= p.mu * (a[j].adjoint() * a[j]);
    }
    for (std::size_t j = 0; j + 1 < p.n_sites; ++j) {
        const ComplexMatrix pair = p.t_hop * (a[j].adjoint() * a[j + 1])
                                   + p.delta_abs * (a[j] * a[j + 1]);
        h.noalias() -= pair + pair.adjoint();
    }

    std::vector<LindbladChannel> channels;
    if (p.gamma > 0.0) {
        for (std::size_t site : dissipation_sites(p.layout, p.n_sites)) {
            channels.push_back({p.gamma, a[site]});
        }
    }
    return LindbladSystem(std::move(h), std::move(channels), shape);
}

// --------------------------- Dicke model ------------------------------------

LindbladSystem build_dicke(const DickeParams& p) {
    if (p.n_spins < 1) throw std::invalid_argument("build_dicke: n_spins must be >= 1");
    if (p.n_cut < 1) throw std::invalid_argument("build_dicke: n_cut must be >= 1");
    for (double rate : {p.gamma_cavity, p.gamma_le, p.gamma_lp, p.gamma_ld,
                        p.gamma_ge, p.gamma_gp, p.gamma_gd}) {
        if (rate < 0.0) throw std::invalid_argument("build_dicke: rates must be >= 0");
    }
    std::vector<Eigen::Index> dims{p.n_cut + 1};
    dims.insert(dims.end(), p.n_spins, 2);
    const SpaceShape shape(std::move(dims));
    const Eigen::Index d = shape.total_dim();
    if (d > 128) throw std::invalid_argument("build_dicke: Hilbert dimension exceeds 128");

    const double spin_scale = p.spin_half ? 0.5 : 1.0;
    const ComplexMatrix b = ops::embed_local(ops::boson_annihilate(p.n_cut), 0, shape);
    const ComplexMatrix b_plus_bd = b + b.adjoint();

    ComplexMatrix h = p.omega * (b.adjoint() * b);
    ComplexMatrix j_minus = ComplexMatrix::Zero(d, d);
    ComplexMatrix j_plus = ComplexMatrix::Zero(d, d);
    ComplexMatrix j_z = ComplexMatrix::Zero(d, d);
    const double coupling = p.g / std::sqrt(static_cast<double>(p.n_spins));
    for (std::size_t j = 0; j < p.n_spins; ++j) {
        const ComplexMatrix z_j = spin_scale * ops::embed_local(ops::pauli_z(), j + 1, shape);
        const ComplexMatrix x_j = spin_scale * ops::embed_local(ops::pauli_x(), j + 1, shape);
        h.noalias() += p.omega0 * z_j;
        h.noalias() += coupling * (x_j * b_plus_bd);
        j_minus.noalias() += ops::embed_local(ops::sigma_minus(), j + 1, shape);
        j_plus.noalias() += ops::embed_local(ops::sigma_plus(), j + 1, shape);
        j_z.noalias() += z_j;
    }

    std::vector<LindbladChannel> channels;
    auto add = [&channels](double rate, ComplexMatrix jump) {
        if (rate > 0.0) channels.push_back({rate, std::move(jump)});
    };
    add(p.gamma_cavity, b);
    for (std::size_t j = 0; j < p.n_spins; ++j) {
        add(p.gamma_le, ops::embed_local(ops::sigma_minus(), j + 1, shape));
        add(p.gamma_lp, ops::embed_local(ops::sigma_plus(), j + 1, shape));
        add(p.gamma_ld, spin_scale * ops::embed_local(ops::pauli_z(), j + 1, shape));
    }
    add(p.gamma_ge, j_minus);
    add(p.gamma_gp, j_plus);
    add(p.gamma_gd, j_z);

    return LindbladSystem(std::move(h), std::move(channels), shape);
}

// --------------------------- phase labels -----------------------------------

TfimPhase tfim_phase(const TfimParams& p) {
    return std::abs(p.g) < 1.0 ? TfimPhase::ordered : TfimPhase::disordered;
}

KitaevPhase kitaev_phase(const KitaevParams& p) {
    return p.mu > 2.0 * p.t_hop ? KitaevPhase::trivial : KitaevPhase::topological;
}

DickePhase dicke_phase(const DickeParams& p) {
    return p.g > dicke_critical_coupling(p.omega, p.omega0) ? DickePhase::superradiant
                                                            : DickePhase::normal;
}

std::string to_string(TfimPhase phase) {
    return phase == TfimPhase::ordered ? "ordered" : "disordered";
}

std::string to_string(KitaevPhase phase) {
    return phase == KitaevPhase::trivial ? "trivial" : "topological";
}

std::string to_string(DickePhase phase) {
    return phase == DickePhase::superradiant ? "superradiant" : "normal";
}

double dicke_critical_coupling(double omega, double omega0) {
    if (omega < 0.0 || omega0 < 0.0) {
        throw std::invalid_argument("dicke_critical_coupling: frequencies must be >= 0");
    }
    return 0.5 * std::sqrt(omega * omega0);
}

}  // namespace lbforge
