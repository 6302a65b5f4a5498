#pragma once

#include <optional>
#include <span>

#include "egd/density.hpp"
#include "egd/dynamics.hpp"

namespace egd {

/// Fraction of the exploration budget spent on genuine exploration,
/// E = 1 - chi / (eps * eta^(2+xi)). Equals 1 when chi = 0 and 0 at the
/// regularization floor eta = (chi/eps)^(1/(2+xi)).
double true_exploration_cost(double eta, double chi, double xi, double epsilon);

/// Distance from the discrete Nash condition: max_i U_i minus the minimum
/// of U over the cells carrying more than support_threshold mass. Zero
/// means every supported action is utility-maximal.
double nash_gap(std::span<const double> u_values, const Density& density,
                double support_threshold = 1e-8);

/// Observed convergence order between two refinement levels:
///   ln(err_prev/err_cur) / ln(eps_cur/eps_prev).
/// err_cur = 0 returns the +infinity sentinel.
double convergence_rate(double eps_prev, double eps_cur, double err_prev,
                        double err_cur);

/// Row of the budget-refinement table emitted by the table1 command.
struct RateTableRow {
    int level = 0;
    double epsilon = 0.0;
    double mean = 0.0;
    double error = 0.0;
    std::optional<double> rate;
};

enum class CompareMode { density, eta_history };

/// Mean relative absolute difference between two runs, in percent, with
/// the mean of each value pair as denominator.
///
/// density mode compares the final (stationary) pdfs; the finer grid must
/// be tiled by the coarser one and is restricted onto it by conservative
/// block averaging. eta_history mode compares eta at shared sample times,
/// subsampling the finer-dt run over the overlapping time range.
double compare_runs(const SimResult& a, const SimResult& b, CompareMode mode);

/// Largest drift of the multiplier from its initial value, max_t |eta_t - eta_0|.
double eta_constancy(std::span<const std::pair<double, double>> eta_history);

}  // namespace egd
