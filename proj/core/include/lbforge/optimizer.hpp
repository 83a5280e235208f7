// optimizer.hpp — Bounded Powell conjugate-direction search over model and
// dissipation parameters, with objectives built from steady-state observables.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lbforge/models.hpp"
#include "lbforge/observables.hpp"
#include "lbforge/steady_state.hpp"
#include "lbforge/types.hpp"

namespace lbforge {

// --------------------------- Powell kernel ----------------------------------

struct PowellOptions {
    double tol = 1e-6;        // stop when a full cycle improves f by less than this
    int max_cycles = 200;
    double line_xatol = 1e-7; // line-search resolution in parameter space
    int line_maxfun = 200;    // per-line-search evaluation budget
};

struct PowellResult {
    RealVector x;
    double fval = 0.0;
    int cycles = 0;
    bool converged = false;
};

// Single-variable bounded minimization (Brent: golden section plus parabolic
// interpolation on [a, b]). Returns the located minimum and its value.
std::pair<double, double> brent_min_bounded(const std::function<double(double)>& f, double a,
                                            double b, double xatol = 1e-8, int maxfun = 500);

// Powell's conjugate direction method restricted to a box: cycle over a
// direction set with Brent line minimization clipped to the box, replace the
// direction of largest decrease when the classic extrapolation test passes,
// stop when a cycle's absolute improvement drops below opts.tol. Never
// evaluates f outside the box.
PowellResult powell_bounded(const std::function<double(const RealVector&)>& f,
                            const RealVector& lower, const RealVector& upper,
                            const RealVector& x0, const PowellOptions& opts = {});

// --------------------------- problem types ----------------------------------

enum class ModelFamily { tfim, kitaev, dicke };
enum class SolverKind { nullspace, constrained };
enum class ObjectiveKind { max_negativity, max_entropy, max_fidelity, min_trace_distance };

std::string to_string(ModelFamily family);
std::string to_string(SolverKind kind);
std::string to_string(ObjectiveKind kind);

using ModelParams = std::variant<TfimParams, KitaevParams, DickeParams>;

// What to score a steady state by. part_a overrides the default entanglement
// cut (chains: first half; Dicke: cavity factor). target defaults to the
// maximally mixed state for fidelity / trace-distance objectives.
// sqrt_convention switches max_fidelity to Tr sqrt(sqrt(rho) sigma sqrt(rho)).
struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::max_negativity;
    std::optional<std::vector<std::size_t>> part_a;
    std::optional<ComplexMatrix> target;
    bool sqrt_convention = false;
};

struct FreeParam {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
};

// A bounded search over named scalar parameters of one model family. The
// phase constraint names a regime label for the family ("ordered",
// "disordered", "trivial", "topological", "normal", "superradiant"); when set,
// every corner of the bounds box must lie in that regime's closure.
struct OptimizationProblem {
    ModelFamily family = ModelFamily::tfim;
    ModelParams base_params = TfimParams{};
    std::vector<FreeParam> free_params;
    ObjectiveSpec objective;
    SolverKind solver = SolverKind::nullspace;
    std::optional<std::string> phase_constraint;
    int n_starts = 1;  // evenly spaced starts on the box diagonal; 1 = midpoint
    PowellOptions powell;
    SolverOptions solver_options;
};

struct TrajectoryPoint {
    RealVector params;
    double objective;  // user sign (larger = better for maximizations)
};

struct OptimizationResult {
    std::map<std::string, double> best_params;
    double best_objective = 0.0;  // user sign
    SteadyStateResult steady_state;
    int n_evaluations = 0;
    std::vector<TrajectoryPoint> trajectory;
    bool converged = false;
};

// Steady-state solve failure (non-convergence, degeneracy, numerical guard)
// during an objective evaluation; carries the offending parameter point and,
// when thrown out of optimize(), the trajectory accumulated so far.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& message, RealVector params)
        : std::runtime_error(message), params_(std::move(params)) {}

    const RealVector& params() const { return params_; }
    const std::vector<TrajectoryPoint>& trajectory() const { return trajectory_; }
    void set_trajectory(std::vector<TrajectoryPoint> trajectory) { trajectory_ = std::move(trajectory); }

private:
    RealVector params_;
    std::vector<TrajectoryPoint> trajectory_;
};

// --------------------------- evaluation pipeline -----------------------------

// Copy of base_params with the problem's free parameters set to `x` by name.
// Unknown parameter names throw std::invalid_argument.
ModelParams apply_free_params(const OptimizationProblem& prob, const RealVector& x);

LindbladSystem build_system(const ModelParams& params);
SpaceShape shape_of(const ModelParams& params);

// Raw measure for the given kind (negativity, entropy, fidelity, or trace
// distance) with defaults for cut and target resolved. This is the user-facing
// objective; only the optimizer's internal view negates maximizations.
double objective_value(const ObjectiveSpec& objective, const ComplexMatrix& rho,
                       const SpaceShape& shape);

// Cold, deterministic evaluation: build the model at `params`, solve the
// steady state with prob.solver, score it. Returns the value the optimizer
// minimizes (maximization objectives are negated). Solve failures and
// degeneracies throw EvaluationError.
double evaluate_objective(const OptimizationProblem& prob, const RealVector& params);

// Powell search over evaluate_objective, warm-starting the constrained solver
// between evaluations. Records the full trajectory (user sign) and re-verifies
// the best point with a cold evaluation.
OptimizationResult optimize(const OptimizationProblem& prob);

}  // namespace lbforge
