#include "egd/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "egd/diagnostics.hpp"
#include "egd/errors.hpp"
#include "egd/numerics.hpp"

namespace egd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<long> forced_steps(const SimConfig& config, long max_steps) {
    std::vector<long> steps;
    for (double t : config.forced_sample_times) {
        if (t < 0.0 || t > config.t_max) continue;
        long k = std::llround(t / config.dt);
        if (k >= 0 && k <= max_steps) steps.push_back(k);
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

}  // namespace

ProtocolSpec ProtocolSpec::pairwise(double w) {
    if (!(w >= 0.0) || !(w <= 1.0)) {
        throw InvalidParams("pairwise weight w must be in [0, 1]");
    }
    return {Kind::Pairwise, w};
}

Grid SimConfig::make_grid() const {
    return nz > 0 ? Grid::box(n, nz) : Grid::line(n);
}

Density SimConfig::make_initial(const Grid& grid) const {
    switch (initial.kind) {
        case InitialSpec::Kind::Uniform:
            return Density::uniform(grid);
        case InitialSpec::Kind::PdfValues:
            return Density::from_pdf(grid, initial.pdf_values);
    }
    throw InvalidParams("unknown initial condition kind");
}

double SimResult::final_eta() const {
    return eta_history.empty() ? kNaN : eta_history.back().second;
}

Density step_pairwise(const Density& mu, std::span<const double> phi, double eta,
                      const LambdaWeights& lambda, double dt) {
    if (!(eta > 0.0)) throw InvalidParams("eta must be > 0");
    if (!(dt > 0.0)) throw InvalidParams("dt must be > 0");
    const int n = mu.cell_count();
    if (static_cast<int>(phi.size()) != n || lambda.size() != n) {
        throw InvalidParams("phi/lambda size does not match the density");
    }

    std::vector<double> next(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double phi_i = phi[static_cast<size_t>(i)];
        double inflow = 0.0;
        double outflow = 0.0;
        for (int j = 0; j < n; ++j) {
            double d = (phi_i - phi[static_cast<size_t>(j)]) / eta;
            if (d > 0.0) {
                inflow += d * mu.mass(j);
            } else if (d < 0.0) {
                outflow += (-d) * lambda[j];
            }
        }
        double updated =
            mu.mass(i) + dt * (lambda[i] * inflow - mu.mass(i) * outflow);
        if (updated < 0.0) {
            throw TimestepTooLarge("cell " + std::to_string(i) +
                                   " would go negative; reduce dt");
        }
        next[static_cast<size_t>(i)] = updated;
    }
    return Density::from_masses(mu.grid(), std::move(next));
}

Density step_logit(const Density& mu, std::span<const double> phi, double eta,
                   double dt) {
    if (!(eta > 0.0)) throw InvalidParams("eta must be > 0");
    if (!(dt > 0.0)) throw InvalidParams("dt must be > 0");
    if (dt > 1.0) {
        throw TimestepTooLarge("logit step requires dt <= 1, got " +
                               std::to_string(dt));
    }
    const int n = mu.cell_count();
    if (static_cast<int>(phi.size()) != n) {
        throw InvalidParams("phi size does not match the density");
    }
    const double area = mu.grid().cell_area();

    double top = -std::numeric_limits<double>::infinity();
    for (double p : phi) top = std::max(top, p / eta);
    std::vector<double> weights(static_cast<size_t>(n));
    CompensatedSum z;
    for (int i = 0; i < n; ++i) {
        weights[static_cast<size_t>(i)] = std::exp(phi[static_cast<size_t>(i)] / eta - top);
        z.add(weights[static_cast<size_t>(i)] * area);
    }
    const double norm = z.value();

    std::vector<double> next(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double target_mass = weights[static_cast<size_t>(i)] * area / norm;
        next[static_cast<size_t>(i)] = (1.0 - dt) * mu.mass(i) + dt * target_mass;
    }
    return Density::from_masses(mu.grid(), std::move(next));
}

namespace {

SimResult run_driver(const SimConfig& config, const Grid& grid) {
    if (!(config.dt > 0.0)) throw InvalidParams("dt must be > 0");
    if (config.t_max < 0.0) throw InvalidParams("t_max must be >= 0");
    if (config.sample_every < 1) throw InvalidParams("sample_every must be >= 1");
    if (!(config.stationary_tol > 0.0)) {
        throw InvalidParams("stationary_tol must be > 0");
    }
    config.hjb.validate(config.protocol.is_pairwise());
    if (config.protocol.kind == ProtocolSpec::Kind::Logit && config.dt > 1.0) {
        throw TimestepTooLarge("logit dynamic requires dt <= 1");
    }

    const long max_steps =
        static_cast<long>(std::ceil(config.t_max / config.dt - 1e-9));
    const std::vector<long> forced = forced_steps(config, max_steps);
    const double u_max = config.utility.u_max(grid);
    const bool pairwise = config.protocol.is_pairwise();

    SimResult result;
    result.eta_history.reserve(static_cast<size_t>(std::max<long>(max_steps, 0)));

    Density mu = config.make_initial(grid);
    double warm_eta = config.hjb.eta_init;
    double last_eta = kNaN;
    bool sampled_this_step = false;

    auto record_sample = [&](long step, const Density& density,
                             std::span<const double> u_values) {
        SampleRecord sample{step * config.dt,
                            step,
                            density,
                            mean_action(density),
                            last_eta,
                            pairwise && !std::isnan(last_eta)
                                ? true_exploration_cost(last_eta, config.hjb.chi,
                                                        config.hjb.xi,
                                                        config.hjb.epsilon)
                                : kNaN,
                            nash_gap(u_values, density)};
        result.samples.push_back(std::move(sample));
    };

    long step = 0;
    try {
        for (; step < max_steps; ++step) {
            std::vector<double> u_values = eval_utility(config.utility, mu);

            HjbSolution solution;
            if (pairwise) {
                LambdaWeights lambda =
                    LambdaWeights::pairwise_mixture(config.protocol.w, mu);
                solution = solve_hjb_quadratic(u_values, lambda, config.hjb,
                                               u_max, warm_eta);
                warm_eta = solution.eta;
                last_eta = solution.eta;
                result.eta_history.emplace_back(step * config.dt, solution.eta);

                sampled_this_step =
                    step % config.sample_every == 0 ||
                    std::binary_search(forced.begin(), forced.end(), step);
                if (sampled_this_step) record_sample(step, mu, u_values);

                Density next =
                    step_pairwise(mu, solution.phi, solution.eta, lambda, config.dt);
                double moved = sup_pdf_diff(next, mu);
                if (config.observer) {
                    config.observer(StepInfo{step, step * config.dt, mu, next,
                                             u_values, solution.phi, solution.eta,
                                             moved});
                }
                mu = std::move(next);
                result.phi_final = std::move(solution.phi);
                if (moved < config.stationary_tol) {
                    result.stationary = true;
                    ++step;
                    break;
                }
            } else {
                solution = solve_hjb_logit(u_values, config.hjb, grid, u_max,
                                           warm_eta);
                warm_eta = solution.eta;
                last_eta = solution.eta;
                result.eta_history.emplace_back(step * config.dt, solution.eta);

                sampled_this_step =
                    step % config.sample_every == 0 ||
                    std::binary_search(forced.begin(), forced.end(), step);
                if (sampled_this_step) record_sample(step, mu, u_values);

                Density next = step_logit(mu, solution.phi, solution.eta, config.dt);
                double moved = sup_pdf_diff(next, mu);
                if (config.observer) {
                    config.observer(StepInfo{step, step * config.dt, mu, next,
                                             u_values, solution.phi, solution.eta,
                                             moved});
                }
                mu = std::move(next);
                result.phi_final = std::move(solution.phi);
                if (moved < config.stationary_tol) {
                    result.stationary = true;
                    ++step;
                    break;
                }
            }
        }
    } catch (Error& e) {
        e.attach_step(step);
        throw;
    }

    result.steps_taken = step;
    std::vector<double> u_final = eval_utility(config.utility, mu);
    record_sample(step, mu, u_final);
    return result;
}

}  // namespace

SimResult run_simulation(const SimConfig& config) {
    Grid grid = config.make_grid();
    if (grid.is_2d()) {
        throw Unsupported("run_simulation handles 1D grids; use run_simulation_2d");
    }
    return run_driver(config, grid);
}

SimResult run_simulation_2d(const SimConfig& config) {
    Grid grid = config.make_grid();
    if (!grid.is_2d()) {
        throw Unsupported("run_simulation_2d requires nz > 0");
    }
    if (config.protocol.kind != ProtocolSpec::Kind::Logit) {
        throw Unsupported("the 2D dynamic is discretized for the logit protocol only");
    }
    return run_driver(config, grid);
}

SimResult run_simulation_auto(const SimConfig& config) {
    return config.nz > 0 ? run_simulation_2d(config) : run_simulation(config);
}

std::vector<SweepOutcome> run_sweep(const std::vector<SimConfig>& configs,
                                    int jobs) {
    if (jobs <= 0) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs <= 0) jobs = 1;
    }
    jobs = std::min<int>(jobs, std::max<size_t>(configs.size(), 1));

    std::vector<SweepOutcome> outcomes(configs.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            size_t index = cursor.fetch_add(1);
            if (index >= configs.size()) return;
            try {
                outcomes[index].result = run_simulation_auto(configs[index]);
            } catch (const std::exception& e) {
                outcomes[index].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
    return outcomes;
}

}  // namespace egd
