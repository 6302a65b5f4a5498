#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "egd/density.hpp"
#include "egd/grid.hpp"

namespace egd {

/// Declarative description of a utility family. Built-in families:
///
///   Quadratic    U(x)   = sum_j (x - x_j)^2 mu_j + shift
///   Resource     U(x)   = (f(m) - c) x + shift,      f(v) = 1/sqrt(v)
///   Resource2D   U(x,z) = (z f(m) - c) x + shift
///
/// with m the mean action along x. Evaluated values must stay in
/// [0, u_max]; both ends are validated numerically at evaluation time.
/// Custom families plug in through an evaluation callback plus a declared
/// upper bound, which keeps the dynamics module utility-agnostic.
class UtilitySpec {
public:
    enum class Kind { Quadratic, Resource, Resource2D, Custom };

    using EvalFn = std::function<std::vector<double>(const Density&)>;

    // Default shifts keep each family nonnegative on its whole domain:
    // quadratic needs none, the 1D resource family needs 1.5, and the 2D one
    // needs the full cost coefficient c since z -> 0 erases the price term.
    static UtilitySpec quadratic(double shift = 0.0);
    static UtilitySpec resource(double c = 2.0, double shift = 1.5);
    static UtilitySpec resource2d(double c = 2.0, double shift = 2.0);
    static UtilitySpec custom(std::string name, EvalFn eval, double u_max);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double c() const { return c_; }
    double shift() const { return shift_; }
    bool is_2d() const { return kind_ == Kind::Resource2D; }

    /// Upper bound of the evaluated utility on the given grid. Defaults:
    /// 1 + shift for Quadratic; shift + |f(m) - c| maximized over the
    /// reachable mean range [first center, last center] for the resource
    /// families. An explicit override wins.
    double u_max(const Grid& grid) const;
    void set_u_max(double value) { u_max_override_ = value; }

private:
    UtilitySpec(Kind kind, std::string name, double c, double shift)
        : kind_(kind), name_(std::move(name)), c_(c), shift_(shift) {}

    Kind kind_;
    std::string name_;
    double c_ = 0.0;
    double shift_ = 0.0;
    std::optional<double> u_max_override_;
    EvalFn eval_;

    friend std::vector<double> eval_utility(const UtilitySpec&, const Density&);
};

/// Evaluates a 1D family at all cell centers of the density's grid.
std::vector<double> eval_utility_1d(const UtilitySpec& spec, const Grid& grid,
                                    const Density& density);

/// Evaluates the Resource2D family over all (x, z) cells, flattened with
/// the x index fastest.
std::vector<double> eval_utility_2d(const UtilitySpec& spec, const Grid& grid,
                                    const Density& density);

/// Rank-dispatching evaluation (handles Custom as well). All evaluation
/// paths validate 0 <= U_i <= u_max.
std::vector<double> eval_utility(const UtilitySpec& spec, const Density& density);

/// Exact min and max of a nonempty sequence.
std::pair<double, double> utility_range(std::span<const double> values);

/// Name-based construction used by configuration files. The registry is
/// pre-populated with the built-in families; additional families can be
/// registered by name.
using UtilityFactory =
    std::function<UtilitySpec(std::optional<double> c, std::optional<double> shift)>;

UtilitySpec make_utility(const std::string& name, std::optional<double> c,
                         std::optional<double> shift);
void register_utility_family(const std::string& name, UtilityFactory factory);
std::vector<std::string> registered_utility_families();

}  // namespace egd
