#include "lbforge/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lbforge {

using nlohmann::json;

namespace {

void require_object(const json& node, const std::string& block) {
    if (!node.is_object()) throw ConfigError("'" + block + "' must be an object");
}

// Strict schema: any key outside `allowed` is rejected.
void reject_unknown_keys(const json& obj, const std::string& block,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + block);
    }
}

double read_double(const json& obj, const std::string& block, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(block + "." + key + " must be a number");
    return obj[key].get<double>();
}

long read_int(const json& obj, const std::string& block, const char* key, long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) throw ConfigError(block + "." + key + " must be an integer");
    return obj[key].get<long>();
}

bool read_bool(const json& obj, const std::string& block, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) throw ConfigError(block + "." + key + " must be a boolean");
    return obj[key].get<bool>();
}

std::string read_string(const json& obj, const std::string& block, const char* key,
                        const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) throw ConfigError(block + "." + key + " must be a string");
    return obj[key].get<std::string>();
}

ModelFamily family_from_string(const std::string& name) {
    if (name == "tfim") return ModelFamily::tfim;
    if (name == "kitaev") return ModelFamily::kitaev;
    if (name == "dicke") return ModelFamily::dicke;
    throw ConfigError("model.family must be one of tfim, kitaev, dicke (got '" + name + "')");
}

DissipationLayout parse_layout(const json& obj, const std::string& block) {
    const std::string name = read_string(obj, block, "layout", "homogeneous");
    try {
        return layout_from_string(name);
    } catch (const std::invalid_argument&) {
        throw ConfigError(block + ".layout must be homogeneous or boundary (got '" + name + "')");
    }
}

ModelParams parse_model_params(const json& obj, ModelFamily family) {
    switch (family) {
        case ModelFamily::tfim: {
            reject_unknown_keys(obj, "model", {"family", "free_params", "phase_constraint",
                                               "n_sites", "j_coupling", "g", "gamma", "layout"});
            TfimParams p;
            p.n_sites = static_cast<std::size_t>(read_int(obj, "model", "n_sites", 2));
            p.j_coupling = read_double(obj, "model", "j_coupling", 1.0);
            p.g = read_double(obj, "model", "g", 0.0);
            p.gamma = read_double(obj, "model", "gamma", 0.0);
            p.layout = parse_layout(obj, "model");
            return p;
        }
        case ModelFamily::kitaev: {
            reject_unknown_keys(obj, "model", {"family", "free_params", "phase_constraint",
                                               "n_sites", "mu", "t_hop", "delta_abs", "phi",
                                               "gamma", "layout"});
            KitaevParams p;
            p.n_sites = static_cast<std::size_t>(read_int(obj, "model", "n_sites", 2));
            p.mu = read_double(obj, "model", "mu", 0.0);
            p.t_hop = read_double(obj, "model", "t_hop", 1.0);
            p.delta_abs = read_double(obj, "model", "delta_abs", 0.0);
            p.phi = read_double(obj, "model", "phi", 0.0);
            p.gamma = read_double(obj, "model", "gamma", 0.0);
            p.layout = parse_layout(obj, "model");
            return p;
        }
        case ModelFamily::dicke: {
            reject_unknown_keys(obj, "model", {"family", "free_params", "phase_constraint",
                                               "n_spins", "n_cut", "omega", "omega0", "g",
                                               "gamma_cavity", "gamma_le", "gamma_lp", "gamma_ld",
                                               "gamma_ge", "gamma_gp", "gamma_gd", "spin_half"});
            DickeParams p;
            p.n_spins = static_cast<std::size_t>(read_int(obj, "model", "n_spins", 1));
            p.n_cut = static_cast<Eigen::Index>(read_int(obj, "model", "n_cut", 1));
            p.omega = read_double(obj, "model", "omega", 1.0);
            p.omega0 = read_double(obj, "model", "omega0", 1.0);
            p.g = read_double(obj, "model", "g", 0.0);
            p.gamma_cavity = read_double(obj, "model", "gamma_cavity", 0.0);
            p.gamma_le = read_double(obj, "model", "gamma_le", 0.0);
            p.gamma_lp = read_double(obj, "model", "gamma_lp", 0.0);
            p.gamma_ld = read_double(obj, "model", "gamma_ld", 0.0);
            p.gamma_ge = read_double(obj, "model", "gamma_ge", 0.0);
            p.gamma_gp = read_double(obj, "model", "gamma_gp", 0.0);
            p.gamma_gd = read_double(obj, "model", "gamma_gd", 0.0);
            p.spin_half = read_bool(obj, "model", "spin_half", false);
            return p;
        }
    }
    throw ConfigError("model.family is invalid");
}

std::vector<FreeParam> parse_free_params(const json& model) {
    std::vector<FreeParam> out;
    if (!model.contains("free_params")) return out;
    const json& arr = model["free_params"];
    if (!arr.is_array()) throw ConfigError("model.free_params must be an array");
    for (const json& entry : arr) {
        require_object(entry, "model.free_params[]");
        reject_unknown_keys(entry, "model.free_params[]", {"name", "lower", "upper"});
        FreeParam fp;
        fp.name = read_string(entry, "model.free_params[]", "name", "");
        if (fp.name.empty()) throw ConfigError("model.free_params[].name is required");
        if (!entry.contains("lower") || !entry.contains("upper")) {
            throw ConfigError("model.free_params[] requires lower and upper");
        }
        fp.lower = read_double(entry, "model.free_params[]", "lower", 0.0);
        fp.upper = read_double(entry, "model.free_params[]", "upper", 0.0);
        out.push_back(std::move(fp));
    }
    return out;
}

ObjectiveKind objective_kind_from_string(const std::string& name) {
    if (name == "max_negativity") return ObjectiveKind::max_negativity;
    if (name == "max_entropy") return ObjectiveKind::max_entropy;
    if (name == "max_fidelity") return ObjectiveKind::max_fidelity;
    if (name == "min_trace_distance") return ObjectiveKind::min_trace_distance;
    throw ConfigError("objective.kind must be one of max_negativity, max_entropy, max_fidelity, "
                      "min_trace_distance (got '" + name + "')");
}

ExperimentConfig parse_config_json(const json& root, std::optional<RunMode> cli_mode) {
    require_object(root, "config");
    reject_unknown_keys(root, "config root",
                        {"mode", "model", "solver", "objective", "optimizer", "sweep", "figure",
                         "output"});

    ExperimentConfig config;
    if (root.contains("mode")) {
        config.mode = mode_from_string(read_string(root, "config", "mode", ""));
        if (cli_mode && *cli_mode != config.mode) {
            throw ConfigError("config declares mode '" + to_string(config.mode)
                              + "' but the command line asked for '" + to_string(*cli_mode) + "'");
        }
    } else if (cli_mode) {
        config.mode = *cli_mode;
    }

    const bool needs_model = config.mode != RunMode::figure;
    if (config.mode == RunMode::figure) {
        for (const char* block : {"model", "solver", "objective", "optimizer", "sweep"}) {
            if (root.contains(block)) {
                throw ConfigError(std::string("figure mode does not take a '") + block
                                  + "' block (recipes are self-contained)");
            }
        }
        if (!root.contains("figure")) throw ConfigError("figure mode requires a 'figure' block");
    } else if (!root.contains("model")) {
        throw ConfigError(to_string(config.mode) + " mode requires a 'model' block");
    }

    if (needs_model) {
        const json& model = root["model"];
        require_object(model, "model");
        if (!model.contains("family")) throw ConfigError("model.family is required");
        config.family = family_from_string(read_string(model, "model", "family", ""));
        config.model = parse_model_params(model, config.family);
        config.free_params = parse_free_params(model);
        const std::string phase = read_string(model, "model", "phase_constraint", "");
        if (!phase.empty()) config.phase_constraint = phase;
    }

    if (root.contains("solver")) {
        const json& solver = root["solver"];
        require_object(solver, "solver");
        reject_unknown_keys(solver, "solver", {"method", "tol", "step_tol", "max_iter"});
        const std::string method = read_string(solver, "solver", "method", "nullspace");
        if (method == "nullspace") config.solver = SolverKind::nullspace;
        else if (method == "constrained") config.solver = SolverKind::constrained;
        else throw ConfigError("solver.method must be nullspace or constrained (got '" + method + "')");
        config.solver_options.tol = read_double(solver, "solver", "tol", config.solver_options.tol);
        config.solver_options.step_tol =
            read_double(solver, "solver", "step_tol", config.solver_options.step_tol);
        config.solver_options.max_iter = static_cast<int>(
            read_int(solver, "solver", "max_iter", config.solver_options.max_iter));
    }

    if (root.contains("objective")) {
        const json& objective = root["objective"];
        require_object(objective, "objective");
        reject_unknown_keys(objective, "objective", {"kind", "sqrt_fidelity", "target"});
        config.objective.kind =
            objective_kind_from_string(read_string(objective, "objective", "kind", "max_negativity"));
        config.objective.sqrt_convention = read_bool(objective, "objective", "sqrt_fidelity", false);
        const std::string target = read_string(objective, "objective", "target", "maximally_mixed");
        if (target != "maximally_mixed") {
            throw ConfigError("objective.target supports only 'maximally_mixed' (got '" + target + "')");
        }
    }

    if (root.contains("optimizer")) {
        const json& opt = root["optimizer"];
        require_object(opt, "optimizer");
        reject_unknown_keys(opt, "optimizer",
                            {"tol", "max_cycles", "n_starts", "line_xatol", "line_maxfun"});
        config.powell.tol = read_double(opt, "optimizer", "tol", config.powell.tol);
        config.powell.max_cycles =
            static_cast<int>(read_int(opt, "optimizer", "max_cycles", config.powell.max_cycles));
        config.powell.line_xatol = read_double(opt, "optimizer", "line_xatol", config.powell.line_xatol);
        config.powell.line_maxfun =
            static_cast<int>(read_int(opt, "optimizer", "line_maxfun", config.powell.line_maxfun));
        config.n_starts = static_cast<int>(read_int(opt, "optimizer", "n_starts", 1));
    }

    if (root.contains("sweep")) {
        const json& sweep = root["sweep"];
        require_object(sweep, "sweep");
        reject_unknown_keys(sweep, "sweep", {"gamma", "n_sites", "n_cut"});
        SweepLists lists;
        auto parse_axis = [&sweep](const char* key, auto& target, auto caster) {
            if (!sweep.contains(key)) return;
            const json& arr = sweep[key];
            if (!arr.is_array() || arr.empty()) {
                throw ConfigError(std::string("sweep.") + key + " must be a nonempty array");
            }
            std::decay_t<decltype(*target)> values;
            for (const json& v : arr) {
                if (!v.is_number()) throw ConfigError(std::string("sweep.") + key + " entries must be numbers");
                values.push_back(caster(v));
            }
            target = std::move(values);
        };
        parse_axis("gamma", lists.gamma, [](const json& v) { return v.get<double>(); });
        parse_axis("n_sites", lists.n_sites, [](const json& v) {
            if (!v.is_number_integer()) throw ConfigError("sweep.n_sites entries must be integers");
            return static_cast<std::size_t>(v.get<long>());
        });
        parse_axis("n_cut", lists.n_cut, [](const json& v) {
            if (!v.is_number_integer()) throw ConfigError("sweep.n_cut entries must be integers");
            return static_cast<Eigen::Index>(v.get<long>());
        });
        if (!lists.gamma && !lists.n_sites && !lists.n_cut) {
            throw ConfigError("sweep block must define at least one axis");
        }
        config.sweep = std::move(lists);
    }

    if (root.contains("figure")) {
        const json& figure = root["figure"];
        require_object(figure, "figure");
        reject_unknown_keys(figure, "figure", {"id", "emit_plot_script", "max_sites"});
        FigureOptions fig;
        fig.id = read_string(figure, "figure", "id", "");
        if (fig.id != "fig1" && fig.id != "fig2" && fig.id != "fig3" && fig.id != "fig4"
            && fig.id != "fig5") {
            throw ConfigError("figure.id must be one of fig1..fig5 (got '" + fig.id + "')");
        }
        fig.emit_plot_script = read_bool(figure, "figure", "emit_plot_script", false);
        const long long cap = read_int(figure, "figure", "max_sites", 6);
        if (cap < 2 || cap > 6) throw ConfigError("figure.max_sites must be in [2, 6]");
        fig.max_sites = static_cast<std::size_t>(cap);
        config.figure = std::move(fig);
    }

    if (root.contains("output")) {
        const json& output = root["output"];
        require_object(output, "output");
        reject_unknown_keys(output, "output", {"path", "format", "bipartition"});
        const std::string path = read_string(output, "output", "path", "");
        if (!path.empty()) config.output.path = path;
        const std::string format = read_string(output, "output", "format", "csv");
        if (format == "csv") config.output.format = OutputFormat::csv;
        else if (format == "json") config.output.format = OutputFormat::json;
        else throw ConfigError("output.format must be csv or json (got '" + format + "')");
        if (output.contains("bipartition")) {
            const json& arr = output["bipartition"];
            if (!arr.is_array() || arr.empty()) {
                throw ConfigError("output.bipartition must be a nonempty array of factor indices");
            }
            std::vector<std::size_t> part_a;
            for (const json& v : arr) {
                if (!v.is_number_integer() || v.get<long>() < 0) {
                    throw ConfigError("output.bipartition entries must be nonnegative integers");
                }
                part_a.push_back(static_cast<std::size_t>(v.get<long>()));
            }
            config.output.bipartition = std::move(part_a);
        }
    }

    // Mode/block consistency beyond per-block checks.
    if (config.mode == RunMode::optimize && config.free_params.empty()) {
        throw ConfigError("optimize mode requires model.free_params");
    }
    if (config.mode == RunMode::sweep && !config.sweep) {
        throw ConfigError("sweep mode requires a 'sweep' block");
    }
    if (config.mode != RunMode::figure && config.figure) {
        throw ConfigError("'figure' block is only valid in figure mode");
    }
    if (config.mode != RunMode::sweep && config.sweep) {
        throw ConfigError("'sweep' block is only valid in sweep mode");
    }
    if (config.family != ModelFamily::dicke && config.sweep && config.sweep->n_cut) {
        throw ConfigError("sweep.n_cut applies only to the dicke family");
    }
    return config;
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::steady:   return "steady";
        case RunMode::optimize: return "optimize";
        case RunMode::sweep:    return "sweep";
        case RunMode::figure:   return "figure";
    }
    throw std::invalid_argument("to_string: unknown RunMode");
}

RunMode mode_from_string(const std::string& name) {
    if (name == "steady") return RunMode::steady;
    if (name == "optimize") return RunMode::optimize;
    if (name == "sweep") return RunMode::sweep;
    if (name == "figure") return RunMode::figure;
    throw ConfigError("mode must be one of steady, optimize, sweep, figure (got '" + name + "')");
}

ExperimentConfig parse_config_text(const std::string& text, std::optional<RunMode> cli_mode) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    return parse_config_json(root, cli_mode);
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                             std::optional<RunMode> cli_mode) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();

    json root;
    try {
        root = json::parse(buffer.str());
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }

    for (const std::string& entry : overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override '" + entry + "' must look like path.to.key=value");
        }
        const std::string path_part = entry.substr(0, eq);
        const std::string value_part = entry.substr(eq + 1);

        json value;
        try {
            value = json::parse(value_part);
        } catch (const json::parse_error&) {
            value = value_part;  // bare strings need no quoting
        }

        json* node = &root;
        std::size_t start = 0;
        while (true) {
            const auto dot = path_part.find('.', start);
            const std::string key = path_part.substr(start, dot - start);
            if (key.empty()) throw ConfigError("override '" + entry + "' has an empty path segment");
            if (dot == std::string::npos) {
                (*node)[key] = value;
                break;
            }
            if (!node->contains(key)) (*node)[key] = json::object();
            node = &(*node)[key];
            if (!node->is_object()) {
                throw ConfigError("override '" + entry + "' descends into a non-object");
            }
            start = dot + 1;
        }
    }
    return parse_config_json(root, cli_mode);
}

OptimizationProblem make_problem(const ExperimentConfig& config) {
    OptimizationProblem prob;
    prob.family = config.family;
    prob.base_params = config.model;
    prob.free_params = config.free_params;
    prob.objective = config.objective;
    if (config.output.bipartition) prob.objective.part_a = config.output.bipartition;
    prob.solver = config.solver;
    prob.solver_options = config.solver_options;
    prob.phase_constraint = config.phase_constraint;
    prob.n_starts = config.n_starts;
    prob.powell = config.powell;
    return prob;
}

}  // namespace lbforge
