#include "egd/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include "egd/csv.hpp"
#include "egd/diagnostics.hpp"
#include "egd/dynamics.hpp"
#include "egd/errors.hpp"
#include "egd/experiment.hpp"
#include "egd/oracle.hpp"

namespace egd::cli {

namespace {

namespace fs = std::filesystem;

fs::path resolve_output_dir(const Options& options, const ExperimentFile& config) {
    fs::path root;
    if (options.out_root) {
        root = *options.out_root;
    } else if (const char* env = std::getenv("EGDSIM_OUTPUT_ROOT")) {
        root = env;
    } else {
        root = ".";
    }
    return root / config.output.directory;
}

std::string shortest_double(double v) {
    char buffer[40];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, end);
}

void write_run_outputs(const fs::path& dir, const std::string& prefix,
                       const ExperimentFile& config, const SimResult& result) {
    fs::create_directories(dir);
    write_density_csv((dir / (prefix + "density.csv")).string(), result);
    SimConfig sim = config.to_sim_config();
    write_eta_csv((dir / (prefix + "eta.csv")).string(), result,
                  sim.protocol.is_pairwise(), sim.hjb);
    write_summary_csv((dir / (prefix + "summary.csv")).string(), result);
}

int fail(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
}

struct OracleCheck {
    std::string name;
    double discrepancy = 0.0;
    double threshold = 1e-8;
    bool ok = false;
    std::string note;
};

void report(std::vector<OracleCheck>& checks, const std::string& name,
            double discrepancy, double threshold, const std::string& note = "") {
    checks.push_back(
        {name, discrepancy, threshold, discrepancy <= threshold, note});
}

}  // namespace

int cmd_run(const std::string& config_path, const Options& options) {
    try {
        ExperimentFile config = ExperimentFile::parse_file(config_path);
        SimResult result = run_simulation_auto(config.to_sim_config());
        fs::path dir = resolve_output_dir(options, config);
        write_run_outputs(dir, config.output.prefix, config, result);
        if (!options.quiet) {
            const SampleRecord& last = result.samples.back();
            std::cout << "run: " << result.steps_taken << " steps, "
                      << (result.stationary ? "stationary" : "reached t_max")
                      << ", mean action " << csv_double(last.mean)
                      << ", eta " << csv_double(result.final_eta())
                      << ", outputs in " << dir.string() << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

int cmd_table1(const std::string& config_path, const Options& options) {
    try {
        ExperimentFile config = ExperimentFile::parse_file(config_path);
        std::vector<double> epsilons = {0.150, 0.225, 0.300, 0.375};
        if (config.sweep && config.sweep->parameter == "epsilon") {
            epsilons = config.sweep->values;
        }
        double c = config.utility.c.value_or(2.0);
        double reference = options.table1_reference.value_or(1.0 / (c * c));

        std::vector<SimConfig> sims;
        sims.reserve(epsilons.size());
        for (double eps : epsilons) {
            sims.push_back(config.with_parameter("epsilon", eps).to_sim_config());
        }
        std::vector<SweepOutcome> outcomes = run_sweep(sims, options.jobs);

        std::vector<RateTableRow> rows;
        for (size_t i = 0; i < outcomes.size(); ++i) {
            if (!outcomes[i].ok()) {
                throw Error("epsilon = " + shortest_double(epsilons[i]) + ": " +
                            outcomes[i].error);
            }
            RateTableRow row;
            row.level = static_cast<int>(i) + 1;
            row.epsilon = epsilons[i];
            row.mean = outcomes[i].result->samples.back().mean;
            row.error = std::abs(row.mean - reference);
            if (i > 0 && rows[i - 1].error > 0.0) {
                row.rate = convergence_rate(rows[i - 1].epsilon, row.epsilon,
                                            rows[i - 1].error, row.error);
            }
            rows.push_back(row);
        }

        fs::path dir = resolve_output_dir(options, config);
        fs::create_directories(dir);
        write_table1_csv((dir / (config.output.prefix + "table1.csv")).string(),
                         rows);
        if (!options.quiet) {
            for (const RateTableRow& row : rows) {
                std::cout << "I=" << row.level << " epsilon=" << row.epsilon
                          << " average=" << csv_double(row.mean)
                          << " error=" << csv_double(row.error);
                if (row.rate) std::cout << " rate=" << csv_double(*row.rate);
                std::cout << "\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

int cmd_sweep(const std::string& config_path, const Options& options) {
    try {
        ExperimentFile config = ExperimentFile::parse_file(config_path);
        if (!config.sweep) {
            throw ConfigError(config_path + ": missing required section [sweep]");
        }
        const std::string& parameter = config.sweep->parameter;
        const std::vector<double>& values = config.sweep->values;

        std::vector<ExperimentFile> variants;
        std::vector<SimConfig> sims;
        for (double value : values) {
            variants.push_back(config.with_parameter(parameter, value));
            sims.push_back(variants.back().to_sim_config());
        }
        std::vector<SweepOutcome> outcomes = run_sweep(sims, options.jobs);

        fs::path dir = resolve_output_dir(options, config);
        fs::create_directories(dir);
        std::ofstream summary(dir / (config.output.prefix + "sweep_summary.csv"),
                              std::ios::binary | std::ios::trunc);
        summary << parameter << ",status,mean_action,steps,stationary,nash_gap,eta\n";
        int failures = 0;
        for (size_t i = 0; i < outcomes.size(); ++i) {
            std::string value_label = shortest_double(values[i]);
            if (outcomes[i].ok()) {
                const SimResult& result = *outcomes[i].result;
                fs::path subdir = dir / (parameter + "=" + value_label);
                write_run_outputs(subdir, config.output.prefix, variants[i], result);
                const SampleRecord& last = result.samples.back();
                summary << csv_double(values[i]) << ",ok," << csv_double(last.mean)
                        << ',' << result.steps_taken << ','
                        << (result.stationary ? 1 : 0) << ','
                        << csv_double(last.nash_gap_value) << ','
                        << csv_double(result.final_eta()) << '\n';
            } else {
                ++failures;
                std::cerr << "sweep " << parameter << "=" << value_label
                          << " failed: " << outcomes[i].error << "\n";
                summary << csv_double(values[i]) << ",error,,,,,\n";
            }
        }
        if (!options.quiet) {
            std::cout << "sweep: " << outcomes.size() - failures << "/"
                      << outcomes.size() << " runs ok, outputs in " << dir.string()
                      << "\n";
        }
        return failures == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

int cmd_oracle_check(const std::string& config_path, const Options& options) {
    try {
        ExperimentFile config = ExperimentFile::parse_file(config_path);
        SimConfig sim = config.to_sim_config();
        Grid grid = sim.make_grid();
        Density initial = sim.make_initial(grid);
        double u_max = sim.utility.u_max(grid);
        std::vector<double> u_values = eval_utility(sim.utility, initial);

        std::vector<OracleCheck> checks;

        // Configured instance: iterative solve vs the independent oracle.
        if (sim.protocol.is_pairwise()) {
            HjbSolution solved =
                solve_hjb_quadratic(u_values, LambdaWeights::pairwise_mixture(
                                                  sim.protocol.w, initial),
                                    sim.hjb, u_max);
            HjbParams tight = sim.hjb;
            tight.tol = sim.hjb.tol / 10.0;
            HjbSolution reference = solve_hjb_quadratic_picard(
                u_values, LambdaWeights::pairwise_mixture(sim.protocol.w, initial),
                tight, u_max);
            double disc = std::abs(solved.eta - reference.eta);
            for (size_t i = 0; i < solved.phi.size(); ++i) {
                disc = std::max(disc, std::abs(solved.phi[i] - reference.phi[i]));
            }
            report(checks, "configured pairwise instance vs picard", disc, 1e-8);
        } else {
            EtaSolveResult solved = solve_eta_logit(u_values, sim.hjb, grid);
            double bisected = eta_bisection_auto(
                [&](double eta) {
                    return entropic_cost(u_values, eta, sim.hjb.delta, grid);
                },
                sim.hjb.epsilon, u_max);
            report(checks, "configured logit instance vs bisection",
                   std::abs(solved.eta - bisected), 1e-8);
        }

        // Constant utility, quadratic: the constraint collapses to
        // chi/eta^(2+xi) = eps with the closed-form root.
        {
            Grid small = Grid::line(8);
            std::vector<double> constant(8, 1.5);
            HjbParams params = sim.hjb;
            params.tol = 1e-13;
            params.eta_init = 1.0;
            HjbSolution solved = solve_hjb_quadratic(
                constant, LambdaWeights::pairwise_mixture(1.0, Density::uniform(small)),
                params, 2.0);
            double analytic =
                std::pow(params.chi / params.epsilon, 1.0 / (2.0 + params.xi));
            report(checks, "constant-utility quadratic vs analytic eta",
                   std::abs(solved.eta - analytic), 1e-12);
            double phi_disc = 0.0;
            for (double p : solved.phi) phi_disc = std::max(phi_disc, std::abs(p - 1.5));
            report(checks, "constant-utility quadratic phi == U", phi_disc, 1e-12);
        }

        // Constant utility, logit: both routes must report NoSolution.
        {
            Grid small = Grid::line(8);
            std::vector<double> constant(8, 1.5);
            bool solver_refused = false;
            bool oracle_refused = false;
            try {
                solve_eta_logit(constant, sim.hjb, small);
            } catch (const NoSolution&) {
                solver_refused = true;
            }
            try {
                eta_bisection_auto(
                    [&](double eta) {
                        return entropic_cost(constant, eta, sim.hjb.delta, small);
                    },
                    sim.hjb.epsilon, 2.0);
            } catch (const NoSolution&) {
                oracle_refused = true;
            }
            report(checks, "constant-utility logit reports NoSolution",
                   solver_refused && oracle_refused ? 0.0 : 1.0, 0.5);
        }

        // Random small instances.
        std::mt19937 rng(20250810u);
        std::uniform_real_distribution<double> u_dist(0.0, 1.5);
        std::uniform_real_distribution<double> eps_dist(0.05, 1.0);
        Grid small = Grid::line(8);
        double worst_logit = 0.0;
        for (int k = 0; k < 20; ++k) {
            std::vector<double> u(8);
            double spread = 0.0;
            do {
                for (double& v : u) v = u_dist(rng);
                auto [lo, hi] = std::minmax_element(u.begin(), u.end());
                spread = *hi - *lo;
            } while (spread < 0.1);
            HjbParams params;
            params.delta = (k % 3 == 0) ? 1.0 : (k % 3 == 1 ? 10.0 : 1e8);
            params.epsilon = eps_dist(rng);
            params.tol = 1e-10;
            EtaSolveResult solved = solve_eta_logit(u, params, small);
            double bisected = eta_bisection_auto(
                [&](double eta) {
                    return entropic_cost(u, eta, params.delta, small);
                },
                params.epsilon, 1.5);
            worst_logit = std::max(worst_logit, std::abs(solved.eta - bisected));
        }
        report(checks, "20 random logit instances vs bisection", worst_logit, 1e-8);

        std::uniform_real_distribution<double> w_dist(0.0, 1.0);
        double worst_quadratic = 0.0;
        for (int k = 0; k < 20; ++k) {
            std::vector<double> u(8);
            for (double& v : u) v = u_dist(rng);
            std::vector<double> mass(8);
            double total = 0.0;
            for (double& m : mass) {
                m = 0.05 + w_dist(rng);
                total += m;
            }
            for (double& m : mass) m /= total;
            LambdaWeights lambda = LambdaWeights::pairwise_mixture(
                w_dist(rng), Density::from_masses(small, mass));
            HjbParams params;
            params.delta = (k % 3 == 0) ? 5.0 : (k % 3 == 1 ? 10.0 : 1000.0);
            params.epsilon = 0.05 + 0.45 * w_dist(rng);
            params.chi = 1e-5;
            params.xi = (k % 2 == 0) ? 0.0 : 2.0;
            params.tol = 1e-10;
            HjbSolution solved = solve_hjb_quadratic(u, lambda, params, 1.5);
            HjbParams tight = params;
            tight.tol = params.tol / 10.0;
            HjbSolution reference =
                solve_hjb_quadratic_picard(u, lambda, tight, 1.5);
            double disc = std::abs(solved.eta - reference.eta);
            for (size_t i = 0; i < solved.phi.size(); ++i) {
                disc = std::max(disc, std::abs(solved.phi[i] - reference.phi[i]));
            }
            worst_quadratic = std::max(worst_quadratic, disc);
        }
        report(checks, "20 random quadratic instances vs picard", worst_quadratic,
               1e-8);

        bool all_ok = true;
        for (const OracleCheck& check : checks) {
            all_ok = all_ok && check.ok;
            if (!options.quiet || !check.ok) {
                std::cout << (check.ok ? "ok   " : "FAIL ") << check.name
                          << ": discrepancy " << csv_double(check.discrepancy)
                          << " (threshold " << csv_double(check.threshold) << ")\n";
            }
        }
        return all_ok ? 0 : 1;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

}  // namespace egd::cli
