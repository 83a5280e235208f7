// config.hpp — Experiment configuration: strict JSON parsing with unknown-key
// rejection, dotted-path overrides, and translation into optimizer problems.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbforge/optimizer.hpp"

namespace lbforge {

// Malformed configuration (schema violation, unknown key, bad value). The CLI
// maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunMode { steady, optimize, sweep, figure };

std::string to_string(RunMode mode);
RunMode mode_from_string(const std::string& name);

enum class OutputFormat { csv, json };

struct OutputOptions {
    std::optional<std::string> path;  // default: stdout
    OutputFormat format = OutputFormat::csv;
    // Overrides the default entanglement cut; recorded in every record.
    std::optional<std::vector<std::size_t>> bipartition;
};

// Cartesian sweep axes. A missing axis keeps the base model's value; an
// explicitly empty list is a config error.
struct SweepLists {
    std::optional<std::vector<double>> gamma;
    std::optional<std::vector<std::size_t>> n_sites;
    std::optional<std::vector<Eigen::Index>> n_cut;
};

struct FigureOptions {
    std::string id;  // fig1 .. fig5
    bool emit_plot_script = false;
    // Upper bound on the chain-figure site grid (2..6); lets CI and quick looks
    // run the same recipe on a truncated grid. fig3 is already desk-scale.
    std::size_t max_sites = 6;
};

struct ExperimentConfig {
    RunMode mode = RunMode::steady;
    ModelFamily family = ModelFamily::tfim;
    ModelParams model = TfimParams{};
    std::vector<FreeParam> free_params;
    std::optional<std::string> phase_constraint;
    SolverKind solver = SolverKind::nullspace;
    SolverOptions solver_options;
    ObjectiveSpec objective;
    PowellOptions powell;
    int n_starts = 1;
    std::optional<SweepLists> sweep;
    std::optional<FigureOptions> figure;
    OutputOptions output;
};

// Parse a JSON document. Every unknown key, anywhere in the tree, is rejected.
// `cli_mode` is the mode implied by the CLI subcommand: it fills in a missing
// "mode" key and conflicts with a declared one are a ConfigError.
ExperimentConfig parse_config_text(const std::string& text,
                                   std::optional<RunMode> cli_mode = std::nullopt);

// Read a config file and apply overrides of the form "solver.method=constrained"
// (dotted path into the JSON tree; the value is parsed as JSON when possible,
// as a string otherwise) before parsing.
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {},
                             std::optional<RunMode> cli_mode = std::nullopt);

// The optimization problem an optimize-mode config (or sweep cell) describes.
OptimizationProblem make_problem(const ExperimentConfig& config);

}  // namespace lbforge
