// runner.hpp — Experiment drivers behind the CLI: single solves, bounded
// optimizations, Cartesian sweeps, and the figure-reproduction recipes, with
// CSV / JSON emission.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbforge/config.hpp"

namespace lbforge {

// One self-describing output row; re-runnable from its fields alone.
struct ResultRecord {
    std::string model;
    std::size_t n_sites = 0;             // chain sites, or Dicke spin count
    std::optional<Eigen::Index> n_cut;   // Dicke only
    double gamma = 0.0;                  // chain gamma, or Dicke cavity rate
    std::string layout;                  // chains only
    std::vector<std::string> param_names;   // full scalar parameter set
    std::vector<double> param_values;
    std::string objective_name;
    double objective_value = 0.0;
    double residual = 0.0;
    std::string solver;
    std::string bipartition;             // part_a indices, ';'-joined; empty if unused
    double seconds = 0.0;
    std::string version;
    std::string error;                   // sweep cells only; empty on success
};

std::string artifact_version();

// Solve the configured model once; one record per reported metric
// (negativity, entropy, purity, fidelity_mixed).
std::vector<ResultRecord> run_steady(const ExperimentConfig& config);

// Powell search per the config's free parameters; a single record carrying the
// optimal full parameter set.
std::vector<ResultRecord> run_optimize(const ExperimentConfig& config);

// Cartesian product of the sweep axes, one record per cell, cells evaluated on
// a worker pool capped by LINDBLAD_FORGE_THREADS (default: logical cores).
// Output order is deterministic (sorted by cell key); per-cell failures are
// recorded in the row's error field and the run continues.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& config);

// Figure-reproduction dataset: per-figure columns, '#' metadata lines, and an
// optional gnuplot script. Timing is deliberately excluded so repeated runs
// are byte-identical.
struct FigureDataset {
    std::string figure_id;
    std::vector<std::string> metadata;              // emitted as '# ...' lines
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::optional<std::string> plot_script;         // gnuplot text when requested
};

FigureDataset run_figure(const ExperimentConfig& config);

// --------------------------- emission ----------------------------------------

// `with_error_column` appends the sweep error column to the documented header.
std::string records_to_csv(const std::vector<ResultRecord>& records, bool with_error_column = false);
std::string records_to_json(const std::vector<ResultRecord>& records, bool with_error_column = false);
std::string dataset_to_csv(const FigureDataset& dataset);

// %.12g rendering used for every numeric field (round-trips well past 1e-8).
std::string format_double(double value);

}  // namespace lbforge
