#include "egd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "egd/errors.hpp"
#include "egd/numerics.hpp"

namespace egd {

namespace {

constexpr double kDenominatorFloor = 1e-300;

double relative_percent(double a, double b) {
    double denom = std::max(0.5 * (std::abs(a) + std::abs(b)), kDenominatorFloor);
    return 100.0 * std::abs(a - b) / denom;
}

// Conservative restriction: coarse-cell pdf from summed fine masses.
std::vector<double> restrict_pdf(const Density& fine, const Grid& coarse) {
    const Grid& fg = fine.grid();
    if (fg.rank() != coarse.rank() || fg.nx() % coarse.nx() != 0 ||
        (coarse.rank() == 2 && fg.nz() % coarse.nz() != 0)) {
        throw IncompatibleRuns("coarse grid does not tile the fine grid");
    }
    int rx = fg.nx() / coarse.nx();
    int rz = coarse.rank() == 2 ? fg.nz() / coarse.nz() : 1;
    std::vector<double> pdf(static_cast<size_t>(coarse.cell_count()));
    for (int cz = 0; cz < coarse.nz(); ++cz) {
        for (int cx = 0; cx < coarse.nx(); ++cx) {
            CompensatedSum mass;
            for (int jz = cz * rz; jz < (cz + 1) * rz; ++jz) {
                for (int jx = cx * rx; jx < (cx + 1) * rx; ++jx) {
                    mass.add(fine.mass(fg.flat_index(jx, jz)));
                }
            }
            pdf[static_cast<size_t>(coarse.flat_index(cx, cz))] =
                mass.value() / coarse.cell_area();
        }
    }
    return pdf;
}

double compare_density(const SimResult& a, const SimResult& b) {
    if (a.samples.empty() || b.samples.empty()) {
        throw IncompatibleRuns("runs carry no recorded densities");
    }
    const Density& da = a.final_density();
    const Density& db = b.final_density();
    if (da.grid().rank() != db.grid().rank()) {
        throw IncompatibleRuns("runs live in different dimensions");
    }
    const Density& coarse = da.grid().nx() <= db.grid().nx() ? da : db;
    const Density& fine = da.grid().nx() <= db.grid().nx() ? db : da;
    std::vector<double> fine_on_coarse = restrict_pdf(fine, coarse.grid());

    CompensatedSum acc;
    int n = coarse.cell_count();
    for (int i = 0; i < n; ++i) {
        acc.add(relative_percent(coarse.pdf(i), fine_on_coarse[static_cast<size_t>(i)]));
    }
    return acc.value() / n;
}

double compare_eta(const SimResult& a, const SimResult& b) {
    const auto& ha = a.eta_history;
    const auto& hb = b.eta_history;
    if (ha.size() < 2 || hb.size() < 2) {
        throw IncompatibleRuns("eta histories need at least two entries");
    }
    double dt_a = ha[1].first - ha[0].first;
    double dt_b = hb[1].first - hb[0].first;
    const auto& coarse = dt_a >= dt_b ? ha : hb;
    const auto& fine = dt_a >= dt_b ? hb : ha;
    double dt_fine = std::min(dt_a, dt_b);
    double ratio = std::max(dt_a, dt_b) / dt_fine;
    if (std::abs(ratio - std::llround(ratio)) > 1e-6) {
        throw IncompatibleRuns("time steps are not integer multiples: " +
                               std::to_string(dt_a) + " vs " + std::to_string(dt_b));
    }
    double t_end = std::min(ha.back().first, hb.back().first);

    CompensatedSum acc;
    long matched = 0;
    for (const auto& [t, eta] : coarse) {
        if (t > t_end * (1.0 + 1e-12) + 1e-12) break;
        long j = std::llround(t / dt_fine);
        if (j < 0 || j >= static_cast<long>(fine.size())) break;
        if (std::abs(fine[static_cast<size_t>(j)].first - t) >
            1e-6 * dt_fine + 1e-12) {
            throw IncompatibleRuns("sample times of the two runs do not align");
        }
        acc.add(relative_percent(eta, fine[static_cast<size_t>(j)].second));
        ++matched;
    }
    if (matched == 0) {
        throw IncompatibleRuns("eta histories do not overlap in time");
    }
    return acc.value() / static_cast<double>(matched);
}

}  // namespace

double true_exploration_cost(double eta, double chi, double xi, double epsilon) {
    if (!(eta > 0.0)) throw InvalidParams("eta must be > 0");
    if (!(epsilon > 0.0)) throw InvalidParams("epsilon must be > 0");
    return 1.0 - chi / (epsilon * std::pow(eta, 2.0 + xi));
}

double nash_gap(std::span<const double> u_values, const Density& density,
                double support_threshold) {
    if (support_threshold < 0.0) {
        throw InvalidParams("support threshold must be >= 0");
    }
    if (static_cast<int>(u_values.size()) != density.cell_count()) {
        throw InvalidParams("utility size does not match the density");
    }
    double overall_max = -std::numeric_limits<double>::infinity();
    double support_min = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < u_values.size(); ++i) {
        overall_max = std::max(overall_max, u_values[i]);
        if (density.mass(static_cast<int>(i)) > support_threshold) {
            support_min = std::min(support_min, u_values[i]);
        }
    }
    if (!std::isfinite(support_min)) {
        throw EmptySupport("no cell carries mass above the support threshold");
    }
    return overall_max - support_min;
}

double convergence_rate(double eps_prev, double eps_cur, double err_prev,
                        double err_cur) {
    if (!(eps_prev > 0.0) || !(eps_cur > 0.0) || !(err_prev > 0.0) ||
        err_cur < 0.0) {
        throw InvalidParams("convergence_rate needs positive levels and errors");
    }
    if (eps_cur == eps_prev) {
        throw InvalidParams("refinement levels must differ");
    }
    if (err_cur == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(err_prev / err_cur) / std::log(eps_cur / eps_prev);
}

double compare_runs(const SimResult& a, const SimResult& b, CompareMode mode) {
    switch (mode) {
        case CompareMode::density:
            return compare_density(a, b);
        case CompareMode::eta_history:
            return compare_eta(a, b);
    }
    throw InvalidParams("unknown comparison mode");
}

double eta_constancy(std::span<const std::pair<double, double>> eta_history) {
    if (eta_history.empty()) {
        throw InvalidParams("eta history is empty");
    }
    double eta0 = eta_history.front().second;
    double worst = 0.0;
    for (const auto& [t, eta] : eta_history) {
        worst = std::max(worst, std::abs(eta - eta0));
    }
    return worst;
}

}  // namespace egd
