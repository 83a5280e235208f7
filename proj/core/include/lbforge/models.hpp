// models.hpp — Dissipative model builders: transverse-field Ising chain,
// Kitaev chain via Jordan-Wigner, and the open Dicke model.
#pragma once

#include <string>

#include "lbforge/liouvillian.hpp"
#include "lbforge/types.hpp"

namespace lbforge {

// Where decay channels attach on a chain.
enum class DissipationLayout { homogeneous, boundary };

std::string to_string(DissipationLayout layout);
DissipationLayout layout_from_string(const std::string& name);

// H = -J (sum_i Z_i Z_{i+1} + g sum_j X_j) on an open chain of n_sites qubits,
// with sigma_minus decay of rate gamma at every site or at the two ends.
struct TfimParams {
    std::size_t n_sites = 2;
    double j_coupling = 1.0;
    double g = 0.0;
    double gamma = 0.0;
    DissipationLayout layout = DissipationLayout::homogeneous;
};

// H = -mu sum_j n_j - sum_j (t a†_j a_{j+1} + |Delta| a_j a_{j+1} + h.c.) on an
// open chain, fermions mapped through the Jordan-Wigner string. `phi` is the
// superconducting phase; it is stored for round-tripping but the Hamiltonian
// uses |Delta| only. Decay channels are the bare annihilators a_j.
struct KitaevParams {
    std::size_t n_sites = 2;
    double mu = 0.0;
    double t_hop = 1.0;
    double delta_abs = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
    DissipationLayout layout = DissipationLayout::homogeneous;
};

// H = omega b†b + omega0 sum_j Z_j + (g/sqrt(N)) sum_j X_j (b + b†) on the
// shape [n_cut+1, 2, ..., 2] (cavity is factor 0). Channels, zero-rate ones
// omitted: cavity b with gamma_cavity; per-spin sigma-_j / sigma+_j / Z_j with
// gamma_le / gamma_lp / gamma_ld; collective J- / J+ / J_z with
// gamma_ge / gamma_gp / gamma_gd. Setting spin_half swaps every Z_j and X_j
// for Z_j/2 and X_j/2, in the Hamiltonian and in the dephasing jumps
// (spin-1/2 convention sensitivity check; sigma± are unchanged).
struct DickeParams {
    std::size_t n_spins = 1;
    Eigen::Index n_cut = 1;
    double omega = 1.0;
    double omega0 = 1.0;
    double g = 0.0;
    double gamma_cavity = 0.0;
    double gamma_le = 0.0;
    double gamma_lp = 0.0;
    double gamma_ld = 0.0;
    double gamma_ge = 0.0;
    double gamma_gp = 0.0;
    double gamma_gd = 0.0;
    bool spin_half = false;
};

LindbladSystem build_tfim(const TfimParams& p);
LindbladSystem build_kitaev(const KitaevParams& p);
// Throws std::invalid_argument when (n_cut+1) * 2^n_spins exceeds 128.
LindbladSystem build_dicke(const DickeParams& p);

// Phase labels, implementing the regime inequalities exactly.
enum class TfimPhase { ordered, disordered };      // ordered iff |g| < 1
enum class KitaevPhase { topological, trivial };   // trivial iff mu > 2t
enum class DickePhase { normal, superradiant };    // superradiant iff g > g_c

TfimPhase tfim_phase(const TfimParams& p);
KitaevPhase kitaev_phase(const KitaevParams& p);
DickePhase dicke_phase(const DickeParams& p);

std::string to_string(TfimPhase phase);
std::string to_string(KitaevPhase phase);
std::string to_string(DickePhase phase);

// g_c = sqrt(omega * omega0) / 2.
double dicke_critical_coupling(double omega, double omega0);

}  // namespace lbforge
