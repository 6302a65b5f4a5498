#pragma once

#include <span>
#include <vector>

#include "egd/grid.hpp"

namespace egd {

/// Discrete probability measure of agent actions: one nonnegative mass per
/// grid cell, summing to 1 within 1e-12. Masses (not pdf values) are the
/// stored representation, so conservation is a literal sum invariant; pdf
/// values mass/cell_area are derived on demand.
///
/// Densities are immutable after construction and safe to share across
/// threads.
class Density {
public:
    /// Equal mass in every cell.
    static Density uniform(const Grid& grid);

    /// Masses proportional to pdf_value * cell_area, renormalized to sum
    /// exactly 1. pdf values are point samples at cell centers.
    static Density from_pdf(const Grid& grid, std::span<const double> pdf_values);

    /// Adopts masses verbatim after validating the invariants.
    static Density from_masses(const Grid& grid, std::vector<double> masses);

    const Grid& grid() const { return grid_; }
    std::span<const double> masses() const { return masses_; }
    double mass(int flat) const { return masses_[static_cast<size_t>(flat)]; }
    double pdf(int flat) const {
        return masses_[static_cast<size_t>(flat)] / grid_.cell_area();
    }
    int cell_count() const { return grid_.cell_count(); }

private:
    Density(const Grid& grid, std::vector<double> masses)
        : grid_(grid), masses_(std::move(masses)) {}

    Grid grid_;
    std::vector<double> masses_;
};

/// Average action along x: sum of centers_x[i] * mass.
double mean_action(const Density& density);

/// Sup-norm distance between the pdf values of two densities on the same
/// grid. This is the stationarity metric of the time-stepping drivers.
double sup_pdf_diff(const Density& a, const Density& b);

}  // namespace egd
