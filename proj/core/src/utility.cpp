#include "egd/utility.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "egd/errors.hpp"
#include "egd/numerics.hpp"

namespace egd {

namespace {

// Resource price response f(v) = 1/sqrt(v). The small offset the continuous
// model needs to avoid division by zero is dropped: means of cell-centered
// densities are bounded below by the first center.
double resource_price(double mean) {
    if (!(mean > 0.0)) {
        throw DegenerateMean("mean action " + std::to_string(mean) +
                             " is not positive; resource utility undefined");
    }
    return 1.0 / std::sqrt(mean);
}

void validate_bounds(std::span<const double> values, double u_max,
                     const std::string& name) {
    for (double v : values) {
        if (!(v >= 0.0)) {
            throw ShiftTooSmall("utility '" + name + "' evaluated to " +
                                std::to_string(v) +
                                " < 0; increase the additive shift");
        }
        if (v > u_max * (1.0 + 1e-12) + 1e-12) {
            throw InvalidParams("utility '" + name + "' evaluated to " +
                                std::to_string(v) + " above its bound " +
                                std::to_string(u_max));
        }
    }
}

std::map<std::string, UtilityFactory>& registry() {
    static std::map<std::string, UtilityFactory> families = {
        {"quadratic",
         [](std::optional<double> c, std::optional<double> shift) {
             if (c) throw InvalidParams("quadratic utility takes no parameter c");
             return UtilitySpec::quadratic(shift.value_or(0.0));
         }},
        {"resource",
         [](std::optional<double> c, std::optional<double> shift) {
             return UtilitySpec::resource(c.value_or(2.0), shift.value_or(1.5));
         }},
        {"resource2d",
         [](std::optional<double> c, std::optional<double> shift) {
             double cc = c.value_or(2.0);
             return UtilitySpec::resource2d(cc, shift.value_or(cc));
         }},
    };
    return families;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

UtilitySpec UtilitySpec::quadratic(double shift) {
    return UtilitySpec(Kind::Quadratic, "quadratic", 0.0, shift);
}

UtilitySpec UtilitySpec::resource(double c, double shift) {
    if (!(c > 0.0)) throw InvalidParams("resource utility requires c > 0");
    return UtilitySpec(Kind::Resource, "resource", c, shift);
}

UtilitySpec UtilitySpec::resource2d(double c, double shift) {
    if (!(c > 0.0)) throw InvalidParams("resource2d utility requires c > 0");
    return UtilitySpec(Kind::Resource2D, "resource2d", c, shift);
}

UtilitySpec UtilitySpec::custom(std::string name, EvalFn eval, double u_max) {
    UtilitySpec spec(Kind::Custom, std::move(name), 0.0, 0.0);
    spec.eval_ = std::move(eval);
    spec.u_max_override_ = u_max;
    return spec;
}

double UtilitySpec::u_max(const Grid& grid) const {
    if (u_max_override_) return *u_max_override_;
    switch (kind_) {
        case Kind::Quadratic:
            return 1.0 + shift_;
        case Kind::Resource: {
            // The mean of any cell-centered density lies between the first
            // and last centers; |f(m) - c| peaks at one of the ends.
            double m_lo = grid.centers_x().front();
            double m_hi = grid.centers_x().back();
            double slope = std::max(std::abs(resource_price(m_lo) - c_),
                                    std::abs(resource_price(m_hi) - c_));
            return shift_ + slope;
        }
        case Kind::Resource2D: {
            // x-slope z f(m) - c ranges over [-c, f(m_lo) - c].
            double m_lo = grid.centers_x().front();
            double slope = std::max(c_, resource_price(m_lo) - c_);
            return shift_ + slope;
        }
        case Kind::Custom:
            throw InvalidParams("custom utility must declare u_max");
    }
    throw InvalidParams("unknown utility kind");
}

std::vector<double> eval_utility_1d(const UtilitySpec& spec, const Grid& grid,
                                    const Density& density) {
    if (!grid.same_shape(density.grid())) {
        throw GridMismatch("utility grid does not match density grid");
    }
    if (grid.is_2d()) {
        throw Unsupported("eval_utility_1d requires a 1D grid");
    }
    std::span<const double> x = grid.centers_x();
    int n = grid.cell_count();
    std::vector<double> values(static_cast<size_t>(n));
    switch (spec.kind()) {
        case UtilitySpec::Kind::Quadratic: {
            // sum_j (x - x_j)^2 mu_j = x^2 - 2 x m1 + m2 with the first two
            // moments of the density; exact rearrangement of the direct sum.
            CompensatedSum m1_acc, m2_acc;
            for (int j = 0; j < n; ++j) {
                m1_acc.add(x[j] * density.mass(j));
                m2_acc.add(x[j] * x[j] * density.mass(j));
            }
            double m1 = m1_acc.value();
            double m2 = m2_acc.value();
            for (int i = 0; i < n; ++i) {
                values[static_cast<size_t>(i)] =
                    x[i] * x[i] - 2.0 * x[i] * m1 + m2 + spec.shift();
            }
            break;
        }
        case UtilitySpec::Kind::Resource: {
            double slope = resource_price(mean_action(density)) - spec.c();
            for (int i = 0; i < n; ++i) {
                values[static_cast<size_t>(i)] = slope * x[i] + spec.shift();
            }
            break;
        }
        default:
            throw Unsupported("utility '" + spec.name() + "' is not a 1D family");
    }
    validate_bounds(values, spec.u_max(grid), spec.name());
    return values;
}

std::vector<double> eval_utility_2d(const UtilitySpec& spec, const Grid& grid,
                                    const Density& density) {
    if (!grid.same_shape(density.grid())) {
        throw GridMismatch("utility grid does not match density grid");
    }
    if (!grid.is_2d()) {
        throw Unsupported("eval_utility_2d requires a 2D grid");
    }
    if (spec.kind() != UtilitySpec::Kind::Resource2D) {
        throw Unsupported("utility '" + spec.name() + "' is not a 2D family");
    }
    double price = resource_price(mean_action(density));
    std::span<const double> x = grid.centers_x();
    std::span<const double> z = grid.centers_z();
    std::vector<double> values(static_cast<size_t>(grid.cell_count()));
    for (int j = 0; j < grid.nz(); ++j) {
        double gain = z[j] * price - spec.c();
        for (int i = 0; i < grid.nx(); ++i) {
            values[static_cast<size_t>(grid.flat_index(i, j))] =
                gain * x[i] + spec.shift();
        }
    }
    validate_bounds(values, spec.u_max(grid), spec.name());
    return values;
}

std::vector<double> eval_utility(const UtilitySpec& spec, const Density& density) {
    const Grid& grid = density.grid();
    if (spec.kind() == UtilitySpec::Kind::Custom) {
        std::vector<double> values = spec.eval_(density);
        if (static_cast<int>(values.size()) != grid.cell_count()) {
            throw InvalidParams("custom utility '" + spec.name() +
                                "' returned wrong cell count");
        }
        validate_bounds(values, spec.u_max(grid), spec.name());
        return values;
    }
    return grid.is_2d() ? eval_utility_2d(spec, grid, density)
                        : eval_utility_1d(spec, grid, density);
}

std::pair<double, double> utility_range(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidParams("utility_range needs a nonempty sequence");
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

UtilitySpec make_utility(const std::string& name, std::optional<double> c,
                         std::optional<double> shift) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end()) {
        throw InvalidParams("unknown utility family '" + name + "'");
    }
    return it->second(c, shift);
}

void register_utility_family(const std::string& name, UtilityFactory factory) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[name] = std::move(factory);
}

std::vector<std::string> registered_utility_families() {
    std::lock_guard<std::mutex> lock(registry_mutex());
    std::vector<std::string> names;
    for (const auto& [name, factory] : registry()) names.push_back(name);
    return names;
}

}  // namespace egd
