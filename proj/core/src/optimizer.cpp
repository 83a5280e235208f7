#include "lbforge/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lbforge {

// --------------------------- Brent line minimizer ----------------------------

std::pair<double, double> brent_min_bounded(const std::function<double(double)>& f, double a,
                                            double b, double xatol, int maxfun) {
    if (!(a < b)) throw std::invalid_argument("brent_min_bounded: need a < b");
    if (xatol <= 0.0 || maxfun < 3) throw std::invalid_argument("brent_min_bounded: bad tolerances");

    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));

    double xf = a + golden * (b - a);
    double nfc = xf, fulc = xf;
    double rat = 0.0, e = 0.0;
    double fx = f(xf);
    int num = 1;
    double fnfc = fx, ffulc = fx;
    double xm = 0.5 * (a + b);
    double tol1 = sqrt_eps * std::abs(xf) + xatol / 3.0;
    double tol2 = 2.0 * tol1;

    while (std::abs(xf - xm) > tol2 - 0.5 * (b - a)) {
        bool use_golden = true;
        if (std::abs(e) > tol1) {
            // Parabolic fit through the three best points.
            use_golden = false;
            double r = (xf - nfc) * (fx - ffulc);
            double q = (xf - fulc) * (fx - fnfc);
            double p = (xf - fulc) * q - (xf - nfc) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            r = e;
            e = rat;
            if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - xf) && p < q * (b - xf)) {
                rat = p / q;
                const double x_try = xf + rat;
                if ((x_try - a) < tol2 || (b - x_try) < tol2) {
                    rat = (xm - xf >= 0.0 ? tol1 : -tol1);
                }
            } else {
                use_golden = true;
            }
        }
        if (use_golden) {
            e = (xf >= xm) ? a - xf : b - xf;
            rat = golden * e;
        }

        const double step = (rat >= 0.0 ? 1.0 : -1.0) * std::max(std::abs(rat), tol1);
        const double x = xf + step;
        const double fu = f(x);
        ++num;

        if (fu <= fx) {
            if (x >= xf) a = xf; else b = xf;
            fulc = nfc; ffulc = fnfc;
            nfc = xf;  fnfc = fx;
            xf = x;    fx = fu;
        } else {
            if (x < xf) a = x; else b = x;
            if (fu <= fnfc || nfc == xf) {
                fulc = nfc; ffulc = fnfc;
                nfc = x;    fnfc = fu;
            } else if (fu <= ffulc || fulc == xf || fulc == nfc) {
                fulc = x; ffulc = fu;
            }
        }
        xm = 0.5 * (a + b);
        tol1 = sqrt_eps * std::abs(xf) + xatol / 3.0;
        tol2 = 2.0 * tol1;
        if (num >= maxfun) break;
    }
    return {xf, fx};
}

// --------------------------- Powell -----------------------------------------

namespace {

RealVector clip_to_box(RealVector x, const RealVector& lower, const RealVector& upper) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    return x;
}

// Minimize f along x + t * dir inside the box. Accepts the move only if it
// does not increase f; returns the achieved decrease.
double line_minimize(const std::function<double(const RealVector&)>& f, RealVector& x, double& fx,
                     const RealVector& dir, const RealVector& lower, const RealVector& upper,
                     const PowellOptions& opts) {
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (dir[i] == 0.0) continue;
        double lo = (lower[i] - x[i]) / dir[i];
        double hi = (upper[i] - x[i]) / dir[i];
        if (lo > hi) std::swap(lo, hi);
        t_lo = std::max(t_lo, lo);
        t_hi = std::min(t_hi, hi);
    }
    if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) return 0.0;  // zero direction
    const double dir_norm = dir.norm();
    const double xatol_t = opts.line_xatol / std::max(dir_norm, 1e-300);
    if (t_hi - t_lo <= 2.0 * xatol_t) return 0.0;  // box leaves no room

    auto g = [&](double t) { return f(clip_to_box(x + t * dir, lower, upper)); };
    const auto [t_star, g_star] = brent_min_bounded(g, t_lo, t_hi, xatol_t, opts.line_maxfun);
    // Strictly-better only: a flat line leaves x alone, so a constant
    // objective returns the start point untouched.
    if (g_star < fx) {
        const double decrease = fx - g_star;
        x = clip_to_box(x + t_star * dir, lower, upper);
        fx = g_star;
        return decrease;
    }
    return 0.0;
}

}  // namespace

PowellResult powell_bounded(const std::function<double(const RealVector&)>& f,
                            const RealVector& lower, const RealVector& upper,
                            const RealVector& x0, const PowellOptions& opts) {
    const Eigen::Index n = x0.size();
    if (n == 0) throw std::invalid_argument("powell_bounded: empty start point");
    if (lower.size() != n || upper.size() != n) {
        throw std::invalid_argument("powell_bounded: bounds dimension mismatch");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(lower[i] < upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
            throw std::invalid_argument("powell_bounded: bounds must be finite with lower < upper");
        }
        if (x0[i] < lower[i] || x0[i] > upper[i]) {
            throw std::invalid_argument("powell_bounded: start point outside bounds");
        }
    }
    if (opts.tol <= 0.0 || opts.max_cycles < 1) {
        throw std::invalid_argument("powell_bounded: tol and max_cycles must be positive");
    }

    std::vector<RealVector> dirs;
    dirs.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        RealVector e = RealVector::Zero(n);
        e[i] = 1.0;
        dirs.push_back(std::move(e));
    }

    PowellResult result;
    RealVector x = x0;
    double fx = f(x);

    for (int cycle = 1; cycle <= opts.max_cycles; ++cycle) {
        result.cycles = cycle;
        const RealVector x_start = x;
        const double f_start = fx;

        double delta_max = 0.0;
        std::size_t i_max = 0;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const double decrease = line_minimize(f, x, fx, dirs[i], lower, upper, opts);
            if (decrease > delta_max) {
                delta_max = decrease;
                i_max = i;
            }
        }

        if (f_start - fx < opts.tol) {
            result.converged = true;
            break;
        }

        // Classic extrapolation test: probe the reflected point; when it keeps
        // descending, adopt the cycle's net displacement as a new direction in
        // place of the one that contributed the largest decrease.
        const RealVector x_ext = clip_to_box(2.0 * x - x_start, lower, upper);
        if ((x_ext - x).norm() > 0.0) {
            const double f_ext = f(x_ext);
            if (f_ext < f_start) {
                const double df = f_start - fx;
                const double lhs = 2.0 * (f_start - 2.0 * fx + f_ext) * (df - delta_max) * (df - delta_max);
                const double rhs = delta_max * (f_start - f_ext) * (f_start - f_ext);
                if (lhs < rhs) {
                    RealVector u = x - x_start;
                    if (u.norm() > 0.0) {
                        line_minimize(f, x, fx, u, lower, upper, opts);
                        dirs[i_max] = dirs.back();
                        dirs.back() = std::move(u);
                    }
                }
            }
        }
    }

    result.x = std::move(x);
    result.fval = fx;
    return result;
}

// --------------------------- problem plumbing --------------------------------

std::string to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::tfim:   return "tfim";
        case ModelFamily::kitaev: return "kitaev";
        case ModelFamily::dicke:  return "dicke";
    }
    throw std::invalid_argument("to_string: unknown ModelFamily");
}

std::string to_string(SolverKind kind) {
    return kind == SolverKind::nullspace ? "nullspace" : "constrained";
}

std::string to_string(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::max_negativity:     return "max_negativity";
        case ObjectiveKind::max_entropy:        return "max_entropy";
        case ObjectiveKind::max_fidelity:       return "max_fidelity";
        case ObjectiveKind::min_trace_distance: return "min_trace_distance";
    }
    throw std::invalid_argument("to_string: unknown ObjectiveKind");
}

namespace {

void set_tfim_param(TfimParams& p, const std::string& name, double value) {
    if (name == "g") p.g = value;
    else if (name == "gamma") p.gamma = value;
    else if (name == "j_coupling") p.j_coupling = value;
    else throw std::invalid_argument("tfim has no tunable parameter '" + name + "'");
}

void set_kitaev_param(KitaevParams& p, const std::string& name, double value) {
    if (name == "mu") p.mu = value;
    else if (name == "t_hop") p.t_hop = value;
    else if (name == "delta_abs") p.delta_abs = value;
    else if (name == "phi") p.phi = value;
    else if (name == "gamma") p.gamma = value;
    else throw std::invalid_argument("kitaev has no tunable parameter '" + name + "'");
}

void set_dicke_param(DickeParams& p, const std::string& name, double value) {
    if (name == "g") p.g = value;
    else if (name == "omega") p.omega = value;
    else if (name == "omega0") p.omega0 = value;
    else if (name == "gamma_cavity") p.gamma_cavity = value;
    else if (name == "gamma_le") p.gamma_le = value;
    else if (name == "gamma_lp") p.gamma_lp = value;
    else if (name == "gamma_ld") p.gamma_ld = value;
    else if (name == "gamma_ge") p.gamma_ge = value;
    else if (name == "gamma_gp") p.gamma_gp = value;
    else if (name == "gamma_gd") p.gamma_gd = value;
    else throw std::invalid_argument("dicke has no tunable parameter '" + name + "'");
}

void set_param(ModelParams& params, const std::string& name, double value) {
    std::visit([&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TfimParams>) set_tfim_param(p, name, value);
        else if constexpr (std::is_same_v<T, KitaevParams>) set_kitaev_param(p, name, value);
        else set_dicke_param(p, name, value);
    }, params);
}

ModelFamily family_of(const ModelParams& params) {
    if (std::holds_alternative<TfimParams>(params)) return ModelFamily::tfim;
    if (std::holds_alternative<KitaevParams>(params)) return ModelFamily::kitaev;
    return ModelFamily::dicke;
}

// Closure of the named phase region, so bounds are allowed to touch the
// critical point itself (e.g. g in [0, 1] for the ordered side).
bool phase_closure_contains(const std::string& label, const ModelParams& params) {
    if (const auto* p = std::get_if<TfimParams>(&params)) {
        if (label == "ordered") return std::abs(p->g) <= 1.0;
        if (label == "disordered") return std::abs(p->g) >= 1.0;
        throw std::invalid_argument("tfim has no phase '" + label + "'");
    }
    if (const auto* p = std::get_if<KitaevParams>(&params)) {
        if (label == "trivial") return p->mu >= 2.0 * p->t_hop;
        if (label == "topological") return p->mu <= 2.0 * p->t_hop;
        throw std::invalid_argument("kitaev has no phase '" + label + "'");
    }
    const auto& p = std::get<DickeParams>(params);
    const double gc = dicke_critical_coupling(p.omega, p.omega0);
    if (label == "superradiant") return p.g >= gc;
    if (label == "normal") return p.g <= gc;
    throw std::invalid_argument("dicke has no phase '" + label + "'");
}

void validate_problem(const OptimizationProblem& prob) {
    if (family_of(prob.base_params) != prob.family) {
        throw std::invalid_argument("optimizer: base_params do not match model family");
    }
    if (prob.free_params.empty()) {
        throw std::invalid_argument("optimizer: free_params must be nonempty");
    }
    for (const auto& fp : prob.free_params) {
        if (!std::isfinite(fp.lower) || !std::isfinite(fp.upper) || !(fp.lower < fp.upper)) {
            throw std::invalid_argument("optimizer: bounds for '" + fp.name
                                        + "' must be finite with lower < upper");
        }
    }
    if (prob.n_starts < 1) throw std::invalid_argument("optimizer: n_starts must be >= 1");

    // Reject unknown names early by exercising the setters at the midpoint.
    ModelParams probe = prob.base_params;
    for (const auto& fp : prob.free_params) set_param(probe, fp.name, 0.5 * (fp.lower + fp.upper));

    if (prob.phase_constraint) {
        // The phase inequalities are monotone in each parameter, so the box is
        // inside the closed region iff all its corners are.
        const std::size_t n = prob.free_params.size();
        if (n > 24) throw std::invalid_argument("optimizer: too many free params for phase check");
        for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
            ModelParams at = prob.base_params;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& fp = prob.free_params[i];
                set_param(at, fp.name, (corner >> i) & 1 ? fp.upper : fp.lower);
            }
            if (!phase_closure_contains(*prob.phase_constraint, at)) {
                throw std::invalid_argument("optimizer: bounds leave the '" + *prob.phase_constraint
                                            + "' phase");
            }
        }
    }
}

bool is_maximization(ObjectiveKind kind) { return kind != ObjectiveKind::min_trace_distance; }

}  // namespace

ModelParams apply_free_params(const OptimizationProblem& prob, const RealVector& x) {
    if (x.size() != static_cast<Eigen::Index>(prob.free_params.size())) {
        throw std::invalid_argument("apply_free_params: point dimension mismatch");
    }
    ModelParams params = prob.base_params;
    for (std::size_t i = 0; i < prob.free_params.size(); ++i) {
        set_param(params, prob.free_params[i].name, x[static_cast<Eigen::Index>(i)]);
    }
    return params;
}

LindbladSystem build_system(const ModelParams& params) {
    return std::visit([](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TfimParams>) return build_tfim(p);
        else if constexpr (std::is_same_v<T, KitaevParams>) return build_kitaev(p);
        else return build_dicke(p);
    }, params);
}

SpaceShape shape_of(const ModelParams& params) {
    return std::visit([](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DickeParams>) {
            std::vector<Eigen::Index> dims{p.n_cut + 1};
            dims.insert(dims.end(), p.n_spins, 2);
            return SpaceShape(std::move(dims));
        } else {
            return SpaceShape::qubits(p.n_sites);
        }
    }, params);
}

double objective_value(const ObjectiveSpec& objective, const ComplexMatrix& rho,
                       const SpaceShape& shape) {
    switch (objective.kind) {
        case ObjectiveKind::max_negativity: {
            Bipartition split = objective.part_a ? Bipartition{shape, *objective.part_a}
                                                 : default_bipartition(shape);
            return negativity(rho, split);
        }
        case ObjectiveKind::max_entropy:
            return von_neumann_entropy(rho);
        case ObjectiveKind::max_fidelity:
        case ObjectiveKind::min_trace_distance: {
            const Eigen::Index d = rho.rows();
            const ComplexMatrix target = objective.target
                ? *objective.target
                : ComplexMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
            if (objective.kind == ObjectiveKind::min_trace_distance) return trace_distance(rho, target);
            return objective.sqrt_convention ? sqrt_fidelity(rho, target) : fidelity(rho, target);
        }
    }
    throw std::invalid_argument("objective_value: unknown ObjectiveKind");
}

namespace {

// Shared by the cold and warm evaluation paths: solve + score at one point.
// `warm` is consumed as the constrained solver's start and refreshed on success.
double evaluate_at(const OptimizationProblem& prob, const RealVector& x,
                   std::optional<ComplexMatrix>* warm, SteadyStateResult* state_out) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const auto& fp = prob.free_params[static_cast<std::size_t>(i)];
        if (x[i] < fp.lower || x[i] > fp.upper) {
            throw std::invalid_argument("evaluate_objective: point outside bounds for '" + fp.name + "'");
        }
    }
    const ModelParams params = apply_free_params(prob, x);
    const LindbladSystem system = build_system(params);

    SteadyStateResult solved;
    try {
        if (prob.solver == SolverKind::nullspace) {
            solved = solve_nullspace(build_liouvillian(system));
        } else {
            SolverOptions opts = prob.solver_options;
            if (warm && *warm) opts.initial_state = **warm;
            solved = solve_constrained(system, opts);
        }
    } catch (const NumericalError& err) {
        throw EvaluationError(std::string("steady-state solve failed: ") + err.what(), x);
    }
    if (solved.degenerate) {
        throw EvaluationError("steady state is degenerate at this point", x);
    }
    if (!solved.converged) {
        throw EvaluationError("steady-state solver did not converge", x);
    }
    if (warm) *warm = solved.rho;

    const double value = objective_value(prob.objective, solved.rho, system.shape());
    if (state_out) *state_out = std::move(solved);
    return is_maximization(prob.objective.kind) ? -value : value;
}

}  // namespace

double evaluate_objective(const OptimizationProblem& prob, const RealVector& params) {
    validate_problem(prob);
    return evaluate_at(prob, params, nullptr, nullptr);
}

OptimizationResult optimize(const OptimizationProblem& prob) {
    validate_problem(prob);
    const Eigen::Index n = static_cast<Eigen::Index>(prob.free_params.size());
    RealVector lower(n), upper(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        lower[i] = prob.free_params[static_cast<std::size_t>(i)].lower;
        upper[i] = prob.free_params[static_cast<std::size_t>(i)].upper;
    }

    OptimizationResult result;
    std::optional<ComplexMatrix> warm;
    const bool maximize = is_maximization(prob.objective.kind);

    auto f = [&](const RealVector& x) {
        const double fval = evaluate_at(prob, x, &warm, nullptr);
        result.trajectory.push_back({x, maximize ? -fval : fval});
        ++result.n_evaluations;
        return fval;
    };

    PowellResult best;
    best.fval = std::numeric_limits<double>::infinity();
    try {
        for (int s = 1; s <= prob.n_starts; ++s) {
            const double frac = static_cast<double>(s) / static_cast<double>(prob.n_starts + 1);
            const RealVector x0 = lower + frac * (upper - lower);
            PowellResult run = powell_bounded(f, lower, upper, x0, prob.powell);
            if (run.fval < best.fval) best = std::move(run);
        }

        // Powell reports its final iterate, but an extrapolation probe may have
        // grazed a better point without adopting it; the reported optimum must
        // dominate the whole trajectory, so sweep the log.
        for (const auto& point : result.trajectory) {
            const double fval = maximize ? -point.objective : point.objective;
            if (fval < best.fval) {
                best.fval = fval;
                best.x = point.params;
            }
        }

        // Cold re-verification at the winner; also produces the reported state.
        SteadyStateResult state;
        std::optional<ComplexMatrix> no_warm;
        const double fval_cold = evaluate_at(prob, best.x, &no_warm, &state);
        result.best_objective = maximize ? -fval_cold : fval_cold;
        result.steady_state = std::move(state);
    } catch (EvaluationError& err) {
        err.set_trajectory(std::move(result.trajectory));
        throw;
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        result.best_params[prob.free_params[static_cast<std::size_t>(i)].name] = best.x[i];
    }
    result.converged = best.converged;
    return result;
}

}  // namespace lbforge
