#include "lbforge/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "lbforge/steady_state.hpp"

#ifndef LBFORGE_VERSION_STRING
#define LBFORGE_VERSION_STRING "0.0.0"
#endif

namespace lbforge {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string join_part_a(const std::vector<std::size_t>& part_a) {
    std::string out;
    for (std::size_t i = 0; i < part_a.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(part_a[i]);
    }
    return out;
}

void fill_model_fields(const ModelParams& params, ResultRecord& rec) {
    if (const auto* p = std::get_if<TfimParams>(&params)) {
        rec.model = "tfim";
        rec.n_sites = p->n_sites;
        rec.gamma = p->gamma;
        rec.layout = to_string(p->layout);
        rec.param_names = {"j_coupling", "g", "gamma"};
        rec.param_values = {p->j_coupling, p->g, p->gamma};
    } else if (const auto* p = std::get_if<KitaevParams>(&params)) {
        rec.model = "kitaev";
        rec.n_sites = p->n_sites;
        rec.gamma = p->gamma;
        rec.layout = to_string(p->layout);
        rec.param_names = {"mu", "t_hop", "delta_abs", "phi", "gamma"};
        rec.param_values = {p->mu, p->t_hop, p->delta_abs, p->phi, p->gamma};
    } else {
        const auto& q = std::get<DickeParams>(params);
        rec.model = "dicke";
        rec.n_sites = q.n_spins;
        rec.n_cut = q.n_cut;
        rec.gamma = q.gamma_cavity;
        rec.param_names = {"omega", "omega0", "g", "gamma_cavity", "gamma_le", "gamma_lp",
                           "gamma_ld", "gamma_ge", "gamma_gp", "gamma_gd"};
        rec.param_values = {q.omega, q.omega0, q.g, q.gamma_cavity, q.gamma_le, q.gamma_lp,
                            q.gamma_ld, q.gamma_ge, q.gamma_gp, q.gamma_gd};
    }
    rec.version = artifact_version();
}

Bipartition resolve_bipartition(const ExperimentConfig& config, const SpaceShape& shape) {
    if (config.output.bipartition) return Bipartition{shape, *config.output.bipartition};
    return default_bipartition(shape);
}

SteadyStateResult solve_with(const ExperimentConfig& config, const LindbladSystem& system) {
    if (config.solver == SolverKind::nullspace) {
        return solve_nullspace(build_liouvillian(system));
    }
    return solve_constrained(system, config.solver_options);
}

unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LINDBLAD_FORGE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
        std::cerr << "LINDBLAD_FORGE_THREADS='" << env << "' is not a positive integer; using "
                  << hw << "\n";
    }
    return hw;
}

}  // namespace

std::string artifact_version() { return LBFORGE_VERSION_STRING; }

std::string format_double(double value) {
    if (std::isnan(value)) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

// --------------------------- steady ------------------------------------------

std::vector<ResultRecord> run_steady(const ExperimentConfig& config) {
    const LindbladSystem system = build_system(config.model);
    const auto start = Clock::now();
    const SteadyStateResult solved = solve_with(config, system);
    const double seconds = elapsed_seconds(start);
    if (!solved.converged) throw NumericalError("run_steady: solver did not converge");

    const Eigen::Index d = system.dim();
    const Bipartition split = resolve_bipartition(config, system.shape());
    const ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / static_cast<double>(d);

    ResultRecord base;
    fill_model_fields(config.model, base);
    base.residual = solved.residual;
    base.solver = to_string(config.solver);
    base.seconds = seconds;

    std::vector<ResultRecord> records;
    auto emit = [&](const std::string& name, double value, bool uses_split) {
        ResultRecord rec = base;
        rec.objective_name = name;
        rec.objective_value = value;
        if (uses_split) rec.bipartition = join_part_a(split.part_a);
        records.push_back(std::move(rec));
    };
    emit("negativity", negativity(solved.rho, split), true);
    emit("entropy", von_neumann_entropy(solved.rho), false);
    emit("purity", purity(solved.rho), false);
    emit("fidelity_mixed", fidelity(solved.rho, mixed), false);
    return records;
}

// --------------------------- optimize ----------------------------------------

namespace {

ResultRecord optimize_record(const ExperimentConfig& config) {
    const OptimizationProblem prob = make_problem(config);
    const auto start = Clock::now();
    const OptimizationResult opt = optimize(prob);
    const double seconds = elapsed_seconds(start);

    RealVector best(static_cast<Eigen::Index>(prob.free_params.size()));
    for (std::size_t i = 0; i < prob.free_params.size(); ++i) {
        best[static_cast<Eigen::Index>(i)] = opt.best_params.at(prob.free_params[i].name);
    }
    const ModelParams resolved = apply_free_params(prob, best);

    ResultRecord rec;
    fill_model_fields(resolved, rec);
    rec.objective_name = to_string(prob.objective.kind);
    rec.objective_value = opt.best_objective;
    rec.residual = opt.steady_state.residual;
    rec.solver = to_string(prob.solver);
    rec.seconds = seconds;
    if (prob.objective.kind == ObjectiveKind::max_negativity) {
        const Bipartition split = prob.objective.part_a
            ? Bipartition{shape_of(resolved), *prob.objective.part_a}
            : default_bipartition(shape_of(resolved));
        rec.bipartition = join_part_a(split.part_a);
    }
    return rec;
}

}  // namespace

std::vector<ResultRecord> run_optimize(const ExperimentConfig& config) {
    return {optimize_record(config)};
}

// --------------------------- sweep --------------------------------------------

namespace {

struct SweepCell {
    std::size_t n_sites;
    Eigen::Index n_cut;  // -1 for chains
    double gamma;
};

ExperimentConfig cell_config(const ExperimentConfig& config, const SweepCell& cell) {
    ExperimentConfig out = config;
    std::visit([&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DickeParams>) {
            p.n_spins = cell.n_sites;
            if (cell.n_cut >= 0) p.n_cut = cell.n_cut;
            p.gamma_cavity = cell.gamma;
        } else {
            p.n_sites = cell.n_sites;
            p.gamma = cell.gamma;
        }
    }, out.model);
    return out;
}

ResultRecord run_cell(const ExperimentConfig& config) {
    if (!config.free_params.empty()) return optimize_record(config);

    const LindbladSystem system = build_system(config.model);
    const auto start = Clock::now();
    const SteadyStateResult solved = solve_with(config, system);
    const double seconds = elapsed_seconds(start);
    if (!solved.converged) throw NumericalError("sweep cell: solver did not converge");

    ObjectiveSpec objective = config.objective;
    if (config.output.bipartition) objective.part_a = config.output.bipartition;

    ResultRecord rec;
    fill_model_fields(config.model, rec);
    rec.objective_name = to_string(objective.kind);
    rec.objective_value = objective_value(objective, solved.rho, system.shape());
    rec.residual = solved.residual;
    rec.solver = to_string(config.solver);
    rec.seconds = seconds;
    if (objective.kind == ObjectiveKind::max_negativity) {
        const Bipartition split = resolve_bipartition(config, system.shape());
        rec.bipartition = join_part_a(split.part_a);
    }
    return rec;
}

template <typename T>
std::vector<T> sorted_axis(std::optional<std::vector<T>> axis, T base_value) {
    std::vector<T> values = axis ? std::move(*axis) : std::vector<T>{base_value};
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

}  // namespace

std::vector<ResultRecord> run_sweep(const ExperimentConfig& config) {
    if (!config.sweep) throw ConfigError("run_sweep: config has no sweep block");

    std::size_t base_sites = 0;
    Eigen::Index base_cut = -1;
    double base_gamma = 0.0;
    std::visit([&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DickeParams>) {
            base_sites = p.n_spins;
            base_cut = p.n_cut;
            base_gamma = p.gamma_cavity;
        } else {
            base_sites = p.n_sites;
            base_gamma = p.gamma;
        }
    }, config.model);

    const auto sites = sorted_axis(config.sweep->n_sites, base_sites);
    const auto cuts = sorted_axis(config.sweep->n_cut, base_cut);
    const auto gammas = sorted_axis(config.sweep->gamma, base_gamma);

    // Deterministic cell order: sorted by (n_sites, n_cut, gamma).
    std::vector<SweepCell> cells;
    for (std::size_t n : sites) {
        for (Eigen::Index c : cuts) {
            for (double g : gammas) cells.push_back({n, c, g});
        }
    }

    std::vector<ResultRecord> records(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const ExperimentConfig cfg = cell_config(config, cells[i]);
            try {
                records[i] = run_cell(cfg);
                // Timing is excluded from sweep rows (like figure datasets) so
                // a re-run of the same sweep is byte-identical.
                records[i].seconds = std::nan("");
            } catch (const std::exception& err) {
                ResultRecord rec;
                fill_model_fields(cfg.model, rec);
                rec.objective_name = to_string(cfg.objective.kind);
                rec.objective_value = std::nan("");
                rec.residual = std::nan("");
                rec.seconds = std::nan("");
                rec.solver = to_string(cfg.solver);
                rec.error = err.what();
                records[i] = std::move(rec);
            }
        }
    };

    const unsigned n_workers =
        std::min<unsigned>(thread_cap(), static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

// --------------------------- figures -----------------------------------------

namespace {

struct FigureCellResult {
    double param_opt = 0.0;
    double objective = 0.0;
    double fidelity_mixed = 0.0;
};

FigureCellResult figure_optimize(const OptimizationProblem& prob) {
    const OptimizationResult opt = optimize(prob);
    FigureCellResult out;
    out.param_opt = opt.best_params.at(prob.free_params.front().name);
    out.objective = opt.best_objective;
    const ComplexMatrix& rho = opt.steady_state.rho;
    const ComplexMatrix mixed =
        ComplexMatrix::Identity(rho.rows(), rho.cols()) / double(rho.rows());
    out.fidelity_mixed = fidelity(rho, mixed);
    return out;
}

// Two stacked panels: objective vs n and optimal parameter vs n, one series
// per gamma, reading the dataset's own CSV.
std::string chain_plot_script(const std::string& csv_name, const std::string& objective_label,
                              const std::string& param_label) {
    std::string s;
    s += "set datafile separator comma\n";
    s += "set key autotitle columnhead\n";
    s += "set key outside\n";
    s += "set xlabel 'n_sites'\n";
    s += "gammas = '0.5 1 1.5'\n";
    s += "set multiplot layout 2,1\n";
    s += "set ylabel '" + objective_label + "'\n";
    s += "plot for [g in gammas] '" + csv_name
         + "' using 1:(strcol(2) eq g ? column(4) : 1/0) title 'gamma='.g with linespoints\n";
    s += "set ylabel '" + param_label + "'\n";
    s += "plot for [g in gammas] '" + csv_name
         + "' using 1:(strcol(2) eq g ? column(3) : 1/0) title 'gamma='.g with linespoints\n";
    s += "unset multiplot\n";
    return s;
}

std::string dicke_plot_script(const std::string& csv_name) {
    std::string s;
    s += "set datafile separator comma\n";
    s += "set key autotitle columnhead\n";
    s += "set key outside\n";
    s += "gammas = '0.5 1 1.5'\n";
    s += "set multiplot layout 2,2\n";
    s += "set xlabel 'n_spins'\nset ylabel 'negativity'\n";
    s += "plot for [g in gammas] '" + csv_name
         + "' using 2:(strcol(1) eq 'ab' && strcol(4) eq g ? column(6) : 1/0) "
           "title 'gamma='.g with linespoints\n";
    s += "set ylabel 'g_opt'\n";
    s += "plot for [g in gammas] '" + csv_name
         + "' using 2:(strcol(1) eq 'ab' && strcol(4) eq g ? column(5) : 1/0) "
           "title 'gamma='.g with linespoints\n";
    s += "set xlabel 'n_cut'\nset ylabel 'negativity'\n";
    s += "plot for [g in gammas] '" + csv_name
         + "' using 3:(strcol(1) eq 'cd' && strcol(4) eq g ? column(6) : 1/0) "
           "title 'gamma='.g with linespoints\n";
    s += "set ylabel 'g_opt'\n";
    s += "plot for [g in gammas] '" + csv_name
         + "' using 3:(strcol(1) eq 'cd' && strcol(4) eq g ? column(5) : 1/0) "
           "title 'gamma='.g with linespoints\n";
    s += "unset multiplot\n";
    return s;
}

constexpr double kFigureGammas[] = {0.5, 1.0, 1.5};

FigureDataset figure_chain(const ExperimentConfig& config, const std::string& id) {
    const bool tfim = (id == "fig1");
    const bool fidelity_figure = (id == "fig4" || id == "fig5");
    const DissipationLayout layout =
        (id == "fig4") ? DissipationLayout::boundary : DissipationLayout::homogeneous;
    const std::size_t max_sites = config.figure->max_sites;
    const std::string sites_range = "n_sites 2.." + std::to_string(max_sites);

    FigureDataset ds;
    ds.figure_id = id;
    if (tfim) {
        ds.columns = {"n_sites", "gamma", "g_opt", "negativity"};
        ds.metadata = {"figure: fig1 (optimal NESS entanglement of the transverse-field Ising chain)",
                       "model: tfim, j_coupling=1, homogeneous sigma- dissipation",
                       "grid: " + sites_range + ", gamma {0.5, 1, 1.5}, g in [0, 1] (ordered phase)",
                       "objective: max_negativity, cut: first half of the chain",
                       "solver: constrained"};
    } else {
        ds.columns = {"n_sites", "gamma", "delta_opt", fidelity_figure ? "fidelity" : "negativity"};
        if (id == "fig2") {
            ds.metadata = {"figure: fig2 (optimal NESS entanglement of the Kitaev chain)",
                           "model: kitaev, mu=4, t_hop=1, homogeneous dissipation (trivial phase)",
                           "grid: " + sites_range + ", gamma {0.5, 1, 1.5}, delta_abs in [0, 10]",
                           "objective: max_negativity, cut: first half of the chain",
                           "solver: constrained"};
        } else {
            const std::string where = (id == "fig4") ? "boundary" : "homogeneous";
            ds.metadata = {"figure: " + id + " (optimal fidelity with the maximally mixed state, "
                               + where + " dissipation)",
                           "model: kitaev, mu=0, t_hop=1, " + where
                               + " dissipation (topological phase)",
                           "grid: " + sites_range + ", gamma {0.5, 1, 1.5}, delta_abs in [0, 10]",
                           "objective: max_entropy; the fidelity column reports the Uhlmann "
                               "fidelity of the optimal steady state to I/d",
                           "solver: constrained"};
        }
    }
    if (max_sites < 6) {
        ds.metadata.push_back("deviation: site grid truncated at " + std::to_string(max_sites)
                              + " by figure.max_sites (source grid runs to 6)");
    }
    ds.metadata.push_back("version: " + artifact_version());

    for (double gamma : kFigureGammas) {
        for (std::size_t n = 2; n <= max_sites; ++n) {
            OptimizationProblem prob;
            prob.solver = SolverKind::constrained;
            if (tfim) {
                TfimParams p;
                p.n_sites = n;
                p.j_coupling = 1.0;
                p.gamma = gamma;
                p.layout = DissipationLayout::homogeneous;
                prob.family = ModelFamily::tfim;
                prob.base_params = p;
                prob.free_params = {{"g", 0.0, 1.0}};
                prob.objective.kind = ObjectiveKind::max_negativity;
                prob.phase_constraint = "ordered";
            } else {
                KitaevParams p;
                p.n_sites = n;
                p.mu = fidelity_figure ? 0.0 : 4.0;
                p.t_hop = 1.0;
                p.gamma = gamma;
                p.layout = layout;
                prob.family = ModelFamily::kitaev;
                prob.base_params = p;
                prob.free_params = {{"delta_abs", 0.0, 10.0}};
                prob.objective.kind =
                    fidelity_figure ? ObjectiveKind::max_entropy : ObjectiveKind::max_negativity;
                prob.phase_constraint = fidelity_figure ? "topological" : "trivial";
            }
            const FigureCellResult cell = figure_optimize(prob);
            ds.rows.push_back({std::to_string(n), format_double(gamma),
                               format_double(cell.param_opt),
                               format_double(fidelity_figure ? cell.fidelity_mixed
                                                             : cell.objective)});
        }
    }

    if (config.figure->emit_plot_script) {
        const std::string csv_name = id + ".csv";
        ds.plot_script = chain_plot_script(csv_name, ds.columns[3], ds.columns[2]);
    }
    return ds;
}

FigureDataset figure_dicke(const ExperimentConfig& config) {
    FigureDataset ds;
    ds.figure_id = "fig3";
    ds.columns = {"panel", "n_spins", "n_cut", "gamma", "g_opt", "negativity"};
    ds.metadata = {
        "figure: fig3 (optimal NESS entanglement of the open Dicke model)",
        "model: dicke, omega=omega0=1, gamma_le=0.1, gamma_ld=0.01, gamma_ge=0.1, other spin rates 0",
        "grid (panel ab): n_spins {2, 3, 4} at n_cut=4; grid (panel cd): n_cut {2, 3, 4} at n_spins=4",
        "gamma sweeps the cavity rate over {0.5, 1, 1.5}; g in [0.5, 2] (superradiant side)",
        "objective: max_negativity, cut: cavity vs spins",
        "solver: constrained",
        "deviation: source panels span 2..12 sites and 2..12 photons via a permutation-symmetric",
        "  reduced solver; this dense artifact reproduces the trend within its 128-dimension cap",
        "version: " + artifact_version(),
    };

    auto run_panel = [&](const std::string& panel, std::size_t n_spins, Eigen::Index n_cut,
                         double gamma) {
        DickeParams p;
        p.n_spins = n_spins;
        p.n_cut = n_cut;
        p.omega = 1.0;
        p.omega0 = 1.0;
        p.gamma_cavity = gamma;
        p.gamma_le = 0.1;
        p.gamma_ld = 0.01;
        p.gamma_ge = 0.1;
        OptimizationProblem prob;
        prob.family = ModelFamily::dicke;
        prob.base_params = p;
        prob.free_params = {{"g", 0.5, 2.0}};
        prob.objective.kind = ObjectiveKind::max_negativity;
        prob.solver = SolverKind::constrained;
        prob.phase_constraint = "superradiant";
        const FigureCellResult cell = figure_optimize(prob);
        ds.rows.push_back({panel, std::to_string(n_spins), std::to_string(n_cut),
                           format_double(gamma), format_double(cell.param_opt),
                           format_double(cell.objective)});
    };

    for (double gamma : kFigureGammas) {
        for (std::size_t n : {2, 3, 4}) run_panel("ab", n, 4, gamma);
    }
    for (double gamma : kFigureGammas) {
        for (Eigen::Index c : {2, 3, 4}) run_panel("cd", 4, c, gamma);
    }

    if (config.figure->emit_plot_script) ds.plot_script = dicke_plot_script("fig3.csv");
    return ds;
}

}  // namespace

FigureDataset run_figure(const ExperimentConfig& config) {
    if (!config.figure) throw ConfigError("run_figure: config has no figure block");
    const std::string& id = config.figure->id;
    if (id == "fig3") return figure_dicke(config);
    if (id == "fig1" || id == "fig2" || id == "fig4" || id == "fig5") {
        return figure_chain(config, id);
    }
    throw ConfigError("run_figure: unknown figure id '" + id + "'");
}

// --------------------------- emission ----------------------------------------

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ';';
        out += names[i];
    }
    return out;
}

std::string join_values(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ';';
        out += format_double(values[i]);
    }
    return out;
}

}  // namespace

std::string records_to_csv(const std::vector<ResultRecord>& records, bool with_error_column) {
    std::string out = "model,n_sites,n_cut,gamma,layout,param_names,param_values,objective_name,"
                      "objective_value,residual,solver,bipartition,seconds,version";
    if (with_error_column) out += ",error";
    out += "\n";
    for (const ResultRecord& rec : records) {
        out += rec.model;
        out += ',' + std::to_string(rec.n_sites);
        out += ',' + (rec.n_cut ? std::to_string(*rec.n_cut) : std::string{});
        out += ',' + format_double(rec.gamma);
        out += ',' + rec.layout;
        out += ',' + join_names(rec.param_names);
        out += ',' + join_values(rec.param_values);
        out += ',' + rec.objective_name;
        out += ',' + format_double(rec.objective_value);
        out += ',' + format_double(rec.residual);
        out += ',' + rec.solver;
        out += ',' + rec.bipartition;
        out += ',' + format_double(rec.seconds);
        out += ',' + rec.version;
        if (with_error_column) out += ',' + csv_escape(rec.error);
        out += '\n';
    }
    return out;
}

std::string records_to_json(const std::vector<ResultRecord>& records, bool with_error_column) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ResultRecord& rec : records) {
        nlohmann::ordered_json obj;
        obj["model"] = rec.model;
        obj["n_sites"] = rec.n_sites;
        if (rec.n_cut) obj["n_cut"] = *rec.n_cut;
        else obj["n_cut"] = nullptr;
        obj["gamma"] = rec.gamma;
        obj["layout"] = rec.layout;
        obj["param_names"] = rec.param_names;
        obj["param_values"] = rec.param_values;
        obj["objective_name"] = rec.objective_name;
        obj["objective_value"] = rec.objective_value;
        obj["residual"] = rec.residual;
        obj["solver"] = rec.solver;
        obj["bipartition"] = rec.bipartition;
        obj["seconds"] = rec.seconds;
        obj["version"] = rec.version;
        if (with_error_column) obj["error"] = rec.error;
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string dataset_to_csv(const FigureDataset& dataset) {
    std::string out;
    for (const std::string& line : dataset.metadata) out += "# " + line + "\n";
    for (std::size_t i = 0; i < dataset.columns.size(); ++i) {
        if (i) out += ',';
        out += dataset.columns[i];
    }
    out += '\n';
    for (const auto& row : dataset.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(row[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace lbforge
