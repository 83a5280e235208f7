// main.cpp — lindblad-forge command line: steady / optimize / sweep / figure.
// Exit codes: 0 success, 2 configuration errors, 3 numerical failures.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "lbforge/config.hpp"
#include "lbforge/runner.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string format;
};

void add_common_options(CLI::App* sub, CliOptions& opts) {
    sub->add_option("--config", opts.config_path, "JSON experiment description")
        ->required();
    sub->add_option("--override", opts.overrides,
                    "dotted.path=value applied on top of the config (repeatable)");
    sub->add_option("--out", opts.out_path, "output file (default: config's output.path, else stdout)");
    sub->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw lbforge::ConfigError("cannot open output file '" + *path + "'");
    out << text;
    if (!out) throw lbforge::ConfigError("failed writing output file '" + *path + "'");
}

std::string dataset_to_json(const lbforge::FigureDataset& dataset) {
    nlohmann::ordered_json obj;
    obj["figure_id"] = dataset.figure_id;
    obj["metadata"] = dataset.metadata;
    obj["columns"] = dataset.columns;
    obj["rows"] = dataset.rows;
    return obj.dump(2) + "\n";
}

int run(lbforge::RunMode mode, const CliOptions& opts) {
    lbforge::ExperimentConfig config =
        lbforge::load_config(opts.config_path, opts.overrides, mode);
    if (!opts.out_path.empty()) config.output.path = opts.out_path;
    if (!opts.format.empty()) {
        config.output.format =
            opts.format == "json" ? lbforge::OutputFormat::json : lbforge::OutputFormat::csv;
    }
    const bool json = config.output.format == lbforge::OutputFormat::json;

    if (mode == lbforge::RunMode::figure) {
        const lbforge::FigureDataset dataset = lbforge::run_figure(config);
        write_output(config.output.path,
                     json ? dataset_to_json(dataset) : lbforge::dataset_to_csv(dataset));
        if (dataset.plot_script) {
            if (!config.output.path) {
                throw lbforge::ConfigError(
                    "figure.emit_plot_script requires an output path to place the script next to");
            }
            std::filesystem::path script_path(*config.output.path);
            script_path.replace_extension(".gp");
            write_output(script_path.string(), *dataset.plot_script);
        }
        return 0;
    }

    std::vector<lbforge::ResultRecord> records;
    bool with_error_column = false;
    switch (mode) {
        case lbforge::RunMode::steady:   records = lbforge::run_steady(config); break;
        case lbforge::RunMode::optimize: records = lbforge::run_optimize(config); break;
        case lbforge::RunMode::sweep:
            records = lbforge::run_sweep(config);
            with_error_column = true;
            break;
        case lbforge::RunMode::figure:   break;  // handled above
    }
    write_output(config.output.path,
                 json ? lbforge::records_to_json(records, with_error_column)
                      : lbforge::records_to_csv(records, with_error_column));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lindblad-forge: steady states and bounded parameter searches for "
                 "Lindblad-governed open quantum systems"};
    app.require_subcommand(1);

    CliOptions opts;
    auto* steady = app.add_subcommand("steady", "solve one steady state and report its measures");
    auto* optimize = app.add_subcommand("optimize", "maximize an objective over bounded parameters");
    auto* sweep = app.add_subcommand("sweep", "evaluate a Cartesian grid of system sizes and rates");
    auto* figure = app.add_subcommand("figure", "reproduce one of the built-in figure datasets");
    for (auto* sub : {steady, optimize, sweep, figure}) add_common_options(sub, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return 2;
    }

    lbforge::RunMode mode = lbforge::RunMode::steady;
    if (optimize->parsed()) mode = lbforge::RunMode::optimize;
    else if (sweep->parsed()) mode = lbforge::RunMode::sweep;
    else if (figure->parsed()) mode = lbforge::RunMode::figure;

    try {
        return run(mode, opts);
    } catch (const lbforge::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::out_of_range& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const lbforge::EvaluationError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return 3;
    } catch (const lbforge::NumericalError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
