#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egd/dynamics.hpp"

namespace egd {

/// Parsed experiment file: a sectioned key = value text document.
///
///   [grid]      n, nz (optional; selects the 2D driver)
///   [time]      dt, t_max, sample_every, stationary_tol
///   [protocol]  kind = logit | pairwise, w (pairwise only)
///   [utility]   name = quadratic | resource | resource2d, c, shift
///   [hjb]       delta, epsilon, chi, xi, relax, tol, max_iter, eta_init
///   [initial]   kind = uniform | pdf_expr, expr (polynomial in x and z)
///   [output]    directory, prefix
///   [sweep]     parameter, values (comma-separated)   -- optional
///
/// Unknown sections and keys are rejected; numeric values are validated
/// against the owning types. Parse errors carry file, line and column.
struct ExperimentFile {
    struct GridSection {
        int n = 0;
        std::optional<int> nz;
    };
    struct TimeSection {
        double dt = 0.005;
        double t_max = 0.0;
        int sample_every = 200;
        double stationary_tol = 1e-10;
    };
    struct ProtocolSection {
        std::string kind;
        std::optional<double> w;
    };
    struct UtilitySection {
        std::string name;
        std::optional<double> c;
        std::optional<double> shift;
    };
    struct HjbSection {
        double delta = 0.0;
        double epsilon = 0.0;
        double chi = 1e-5;
        double xi = 2.0;
        double relax = 0.05;
        double tol = 1e-10;
        int max_iter = 10000;
        double eta_init = 1.0;
    };
    struct InitialSection {
        std::string kind;
        std::string expr;
    };
    struct OutputSection {
        std::string directory = "out";
        std::string prefix;
    };
    struct SweepSection {
        std::string parameter;
        std::vector<double> values;
    };

    GridSection grid;
    TimeSection time;
    ProtocolSection protocol;
    UtilitySection utility;
    HjbSection hjb;
    InitialSection initial;
    OutputSection output;
    std::optional<SweepSection> sweep;

    static ExperimentFile parse_file(const std::string& path);
    static ExperimentFile parse_string(const std::string& text,
                                       const std::string& name = "<string>");

    /// Canonical serialization; parsing it back yields the same validated
    /// configuration.
    std::string serialize() const;

    /// Materializes the runnable configuration (builds the utility, samples
    /// the initial pdf at cell centers, wires solver parameters).
    SimConfig to_sim_config() const;

    /// Returns a copy with one named parameter replaced; used by sweeps.
    ExperimentFile with_parameter(const std::string& name, double value) const;

    bool is_2d() const { return grid.nz.has_value(); }
};

}  // namespace egd
