// Command-line front end for the forward-looking evolutionary game
// simulator: single runs, budget-refinement tables, parameter sweeps and
// solver oracle checks, all driven by experiment files.

#include <CLI11.hpp>

#include "egd/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Forward-looking evolutionary game dynamics simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    egd::cli::Options options;
    std::string out_root;
    app.add_option("--out", out_root,
                   "Output root directory (default: $EGDSIM_OUTPUT_ROOT or .)");
    app.add_option("--jobs", options.jobs,
                   "Concurrent runs for sweeps (default: hardware threads)");
    app.add_flag("--quiet", options.quiet, "Suppress progress output");

    std::string config_path;

    CLI::App* run = app.add_subcommand("run", "Run one experiment file");
    run->add_option("file", config_path, "Experiment file")->required();

    CLI::App* table1 = app.add_subcommand(
        "table1", "Exploration-budget refinement study (means, errors, rates)");
    table1->add_option("file", config_path, "Experiment file")->required();
    double reference = 0.0;
    CLI::Option* ref_opt = table1->add_option(
        "--reference", reference,
        "Reference mean for the error column (default: c^-2 from the config)");

    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "Cross-check the eta solvers against independent oracles");
    oracle->add_option("file", config_path, "Experiment file")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "Run the [sweep] parameter list");
    sweep->add_option("file", config_path, "Experiment file")->required();

    CLI11_PARSE(app, argc, argv);

    if (!out_root.empty()) options.out_root = out_root;
    if (ref_opt->count() > 0) options.table1_reference = reference;

    if (app.got_subcommand(run)) return egd::cli::cmd_run(config_path, options);
    if (app.got_subcommand(table1)) return egd::cli::cmd_table1(config_path, options);
    if (app.got_subcommand(oracle)) {
        return egd::cli::cmd_oracle_check(config_path, options);
    }
    return egd::cli::cmd_sweep(config_path, options);
}
