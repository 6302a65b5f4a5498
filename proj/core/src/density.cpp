#include "egd/density.hpp"

#include <cmath>

#include "egd/errors.hpp"
#include "egd/numerics.hpp"

namespace egd {

namespace {

constexpr double kMassTolerance = 1e-12;

void validate_masses(std::span<const double> masses) {
    for (double m : masses) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw InvalidDensity("cell mass must be finite and nonnegative, got " +
                                 std::to_string(m));
        }
    }
    double total = compensated_total(masses);
    if (std::abs(total - 1.0) > kMassTolerance) {
        throw InvalidDensity("cell masses must sum to 1 within 1e-12, got " +
                             std::to_string(total));
    }
}

}  // namespace

Density Density::uniform(const Grid& grid) {
    int n = grid.cell_count();
    std::vector<double> masses(static_cast<size_t>(n), 1.0 / n);
    return Density(grid, std::move(masses));
}

Density Density::from_pdf(const Grid& grid, std::span<const double> pdf_values) {
    if (static_cast<int>(pdf_values.size()) != grid.cell_count()) {
        throw InvalidDensity("pdf value count " + std::to_string(pdf_values.size()) +
                             " does not match cell count " +
                             std::to_string(grid.cell_count()));
    }
    CompensatedSum total;
    for (double v : pdf_values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw InvalidDensity("pdf values must be finite and nonnegative");
        }
        total.add(v * grid.cell_area());
    }
    double norm = total.value();
    if (norm <= 0.0) {
        throw InvalidDensity("pdf values must not be all zero");
    }
    std::vector<double> masses(pdf_values.size());
    for (size_t i = 0; i < pdf_values.size(); ++i) {
        masses[i] = pdf_values[i] * grid.cell_area() / norm;
    }
    return Density(grid, std::move(masses));
}

Density Density::from_masses(const Grid& grid, std::vector<double> masses) {
    if (static_cast<int>(masses.size()) != grid.cell_count()) {
        throw InvalidDensity("mass count " + std::to_string(masses.size()) +
                             " does not match cell count " +
                             std::to_string(grid.cell_count()));
    }
    validate_masses(masses);
    return Density(grid, std::move(masses));
}

double mean_action(const Density& density) {
    const Grid& grid = density.grid();
    CompensatedSum acc;
    int n = density.cell_count();
    for (int flat = 0; flat < n; ++flat) {
        acc.add(grid.center_x(flat) * density.mass(flat));
    }
    return acc.value();
}

double sup_pdf_diff(const Density& a, const Density& b) {
    if (!a.grid().same_shape(b.grid())) {
        throw GridMismatch("densities live on different grids");
    }
    double worst = 0.0;
    int n = a.cell_count();
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(a.pdf(i) - b.pdf(i)));
    }
    return worst;
}

}  // namespace egd
