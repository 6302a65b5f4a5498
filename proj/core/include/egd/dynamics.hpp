#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "egd/density.hpp"
#include "egd/grid.hpp"
#include "egd/hjb.hpp"
#include "egd/utility.hpp"

namespace egd {

/// Action-updating protocol. Pairwise covers the replicator (w = 0) and
/// BNN (w = 1) models through the switching-weight mixture; Logit is the
/// normalized-exponential protocol.
struct ProtocolSpec {
    enum class Kind { Pairwise, Logit };

    Kind kind = Kind::Logit;
    double w = 0.0;

    static ProtocolSpec logit() { return {Kind::Logit, 0.0}; }
    static ProtocolSpec pairwise(double w);
    static ProtocolSpec replicator() { return pairwise(0.0); }
    static ProtocolSpec bnn() { return pairwise(1.0); }

    bool is_pairwise() const { return kind == Kind::Pairwise; }
};

/// Initial measure: uniform, or masses proportional to pdf samples at the
/// cell centers.
struct InitialSpec {
    enum class Kind { Uniform, PdfValues };

    Kind kind = Kind::Uniform;
    std::vector<double> pdf_values;

    static InitialSpec uniform() { return {}; }
    static InitialSpec from_pdf(std::vector<double> values) {
        return {Kind::PdfValues, std::move(values)};
    }
};

/// Per-step context passed to an optional observer. Spans stay valid only
/// during the callback.
struct StepInfo {
    long step = 0;
    double t = 0.0;
    const Density& before;
    const Density& after;
    std::span<const double> u_values;
    std::span<const double> phi;
    double eta = 0.0;
    double sup_pdf_step = 0.0;
};

/// Full experiment configuration. Grid sizes follow the utility: nz > 0
/// selects the 2D driver.
struct SimConfig {
    int n = 250;
    int nz = 0;

    double dt = 0.005;
    double t_max = 10.0;
    int sample_every = 200;
    double stationary_tol = 1e-10;
    std::vector<double> forced_sample_times = {0.0, 1.0, 2.0, 10.0};

    ProtocolSpec protocol = ProtocolSpec::logit();
    UtilitySpec utility = UtilitySpec::resource();
    HjbParams hjb;
    InitialSpec initial;

    /// Observer hook for instrumentation (invariant audits, tracing); not
    /// part of the experiment identity.
    std::function<void(const StepInfo&)> observer;

    Grid make_grid() const;
    Density make_initial(const Grid& grid) const;
};

/// One recorded state of a run.
struct SampleRecord {
    double t = 0.0;
    long step = 0;
    Density density;
    double mean = 0.0;
    double eta = 0.0;         ///< multiplier solved at this density (NaN before any solve)
    double e_true = 0.0;      ///< true exploration cost (pairwise runs; NaN for logit)
    double nash_gap_value = 0.0;
};

struct SimResult {
    std::vector<SampleRecord> samples;
    std::vector<std::pair<double, double>> eta_history;  ///< (t, eta) per executed step
    std::vector<double> phi_final;
    bool stationary = false;
    long steps_taken = 0;

    const Density& final_density() const { return samples.back().density; }
    double final_eta() const;
};

/// One explicit Euler step of the pairwise-comparison dynamic:
///   mu_i' = mu_i + dt [ lambda_i sum_j ((phi_i - phi_j)/eta)_+ mu_j
///                       - mu_i sum_j ((phi_j - phi_i)/eta)_+ lambda_j ].
/// Inflow and outflow cancel under relabeling, so mass is conserved; any
/// negative candidate mass raises TimestepTooLarge (never clamped).
Density step_pairwise(const Density& mu, std::span<const double> phi, double eta,
                      const LambdaWeights& lambda, double dt);

/// One explicit Euler step of the logit dynamic: a convex combination of
/// the current measure and the normalized exponential of phi/eta,
///   mu_i' = (1 - dt) mu_i + dt exp(phi_i/eta) area / sum_j exp(phi_j/eta) area.
Density step_logit(const Density& mu, std::span<const double> phi, double eta,
                   double dt);

/// Runs a 1D simulation: per step, evaluate the utility at the current
/// measure, solve the HJB/eta system, advance one Euler step, and stop at
/// stationarity (successive pdf sup-difference below stationary_tol) or at
/// t_max. Solver and step errors propagate with the step index attached.
SimResult run_simulation(const SimConfig& config);

/// 2D driver; logit protocol only.
SimResult run_simulation_2d(const SimConfig& config);

/// Dispatches on config dimensionality.
SimResult run_simulation_auto(const SimConfig& config);

/// Outcome slot of a sweep entry: a result or the error that stopped it.
struct SweepOutcome {
    std::optional<SimResult> result;
    std::string error;
    bool ok() const { return result.has_value(); }
};

/// Runs independent configurations concurrently (at most `jobs` at a time;
/// jobs <= 0 uses the hardware concurrency). Outcomes are ordered by config
/// index regardless of completion order.
std::vector<SweepOutcome> run_sweep(const std::vector<SimConfig>& configs,
                                    int jobs);

}  // namespace egd
