#pragma once

#include <optional>
#include <string>

namespace egd::cli {

/// Shared command options. The output root resolves, in order: --out,
/// the EGDSIM_OUTPUT_ROOT environment variable, the current directory;
/// the config's [output] directory is appended underneath it.
struct Options {
    std::optional<std::string> out_root;
    int jobs = 0;       ///< <= 0: hardware concurrency
    bool quiet = false;
    std::optional<double> table1_reference;  ///< overrides the c^-2 default
};

/// run <file>: one simulation; writes density.csv, eta.csv, summary.csv.
int cmd_run(const std::string& config_path, const Options& options);

/// table1 <file>: exploration-budget refinement study; runs the epsilon
/// ladder (the [sweep] epsilon values, else 0.150/0.225/0.300/0.375),
/// tabulating stationary means, errors against the reference mean and
/// observed convergence rates into table1.csv.
int cmd_table1(const std::string& config_path, const Options& options);

/// oracle-check <file>: cross-checks the iterative solvers against
/// independent oracles (bisection for the logit multiplier, damped Picard
/// for the quadratic system) on the configured instance, analytic
/// constant-utility instances and a bank of random small instances.
/// Exits 0 iff every discrepancy is within 1e-8.
int cmd_oracle_check(const std::string& config_path, const Options& options);

/// sweep <file>: runs the [sweep] parameter list concurrently, one output
/// subdirectory per value, plus a combined sweep_summary.csv.
int cmd_sweep(const std::string& config_path, const Options& options);

}  // namespace egd::cli
