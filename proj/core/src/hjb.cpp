#include "egd/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "egd/errors.hpp"
#include "egd/numerics.hpp"

namespace egd {

namespace {

constexpr double kWeightTolerance = 1e-12;

void validate_nonnegative(std::span<const double> u_values) {
    for (double u : u_values) {
        if (!std::isfinite(u) || u < 0.0) {
            throw InvalidParams("utility values must be finite and nonnegative");
        }
    }
}

void check_phi_bounds(std::span<const double> phi, double u_max) {
    double slack = 1e-9 * std::max(1.0, u_max);
    for (double p : phi) {
        if (!(p >= -slack) || !(p <= u_max + slack)) {
            throw Error("value function left [0, u_max]: phi = " +
                        std::to_string(p) + ", u_max = " + std::to_string(u_max));
        }
    }
}

// Tilted density of W/eta evaluated with max-subtraction. Fills q (pdf
// values) and returns ln Z = ln(sum exp(W_i/eta) * area).
double tilted_pdf(std::span<const double> w, double eta, double area,
                  std::vector<double>& q) {
    size_t n = w.size();
    q.resize(n);
    double top = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        q[i] = w[i] / eta;
        top = std::max(top, q[i]);
    }
    CompensatedSum z;
    for (size_t i = 0; i < n; ++i) {
        q[i] = std::exp(q[i] - top);
        z.add(q[i] * area);
    }
    double z_shifted = z.value();
    for (size_t i = 0; i < n; ++i) q[i] /= z_shifted;
    return top + std::log(z_shifted);
}

struct CostStats {
    double cost = 0.0;      // sum q ln q * area
    double mean_u = 0.0;    // sum U q * area
    double var_w = 0.0;     // variance of W under q
    double log_z = 0.0;
};

CostStats logit_cost_stats(std::span<const double> u_values, double eta,
                           double delta, const Grid& grid) {
    double area = grid.cell_area();
    double front = delta / (delta + 1.0);
    size_t n = u_values.size();
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = front * u_values[i];

    std::vector<double> q;
    double log_z = tilted_pdf(w, eta, area, q);

    CompensatedSum cost, mean_u, mean_w, mean_w2;
    for (size_t i = 0; i < n; ++i) {
        double qa = q[i] * area;
        // ln q_i = W_i/eta - ln Z, exact in logs; q_i = 0 contributes 0.
        if (q[i] > 0.0) cost.add(qa * (w[i] / eta - log_z));
        mean_u.add(qa * u_values[i]);
        mean_w.add(qa * w[i]);
        mean_w2.add(qa * w[i] * w[i]);
    }
    CostStats out;
    out.cost = cost.value();
    out.mean_u = mean_u.value();
    out.var_w = std::max(0.0, mean_w2.value() - mean_w.value() * mean_w.value());
    out.log_z = log_z;

    double alt = mean_w.value() / eta - log_z;
    if (std::abs(alt - out.cost) > 1e-10 * std::max(1.0, std::abs(out.cost))) {
        throw Error("entropic cost forms disagree: " + std::to_string(out.cost) +
                    " vs " + std::to_string(alt));
    }
    return out;
}

}  // namespace

void HjbParams::validate(bool quadratic_case) const {
    if (!(delta > 0.0)) throw InvalidParams("delta must be > 0");
    if (!(epsilon > 0.0)) throw InvalidParams("epsilon must be > 0");
    if (!(chi >= 0.0)) throw InvalidParams("chi must be >= 0");
    if (!(xi >= 0.0)) throw InvalidParams("xi must be >= 0");
    if (!(relax > 0.0) || relax > 1.0) throw InvalidParams("relax must be in (0, 1]");
    if (!(tol > 0.0)) throw InvalidParams("tol must be > 0");
    if (max_iter < 1) throw InvalidParams("max_iter must be positive");
    if (!(eta_init > 0.0)) throw InvalidParams("eta_init must be > 0");
    if (quadratic_case && !(chi > 0.0)) {
        throw InvalidParams(
            "quadratic-cost solve requires chi > 0; the unregularized "
            "constraint degenerates at equilibrium");
    }
}

LambdaWeights LambdaWeights::pairwise_mixture(double w, const Density& mu) {
    if (!(w >= 0.0) || !(w <= 1.0)) throw InvalidParams("w must be in [0, 1]");
    int n = mu.cell_count();
    double uniform_mass = 1.0 / n;
    std::vector<double> weights(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        weights[static_cast<size_t>(i)] = w * uniform_mass + (1.0 - w) * mu.mass(i);
    }
    return LambdaWeights(std::move(weights));
}

LambdaWeights LambdaWeights::from_weights(std::vector<double> weights) {
    for (double v : weights) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw InvalidParams("lambda weights must be finite and nonnegative");
        }
    }
    double total = compensated_total(weights);
    if (std::abs(total - 1.0) > kWeightTolerance) {
        throw InvalidParams("lambda weights must sum to 1 within 1e-12, got " +
                            std::to_string(total));
    }
    return LambdaWeights(std::move(weights));
}

HjbSolution solve_hjb_quadratic(std::span<const double> u_values,
                                const LambdaWeights& lambda,
                                const HjbParams& params, double u_max) {
    return solve_hjb_quadratic(u_values, lambda, params, u_max, params.eta_init);
}

HjbSolution solve_hjb_quadratic(std::span<const double> u_values,
                                const LambdaWeights& lambda,
                                const HjbParams& params, double u_max,
                                double eta_start) {
    params.validate(/*quadratic_case=*/true);
    validate_nonnegative(u_values);
    if (lambda.size() != static_cast<int>(u_values.size())) {
        throw InvalidParams("lambda size does not match utility size");
    }
    if (!(eta_start > 0.0)) throw InvalidParams("eta warm start must be > 0");

    const int n = static_cast<int>(u_values.size());
    const double r = params.relax;
    std::vector<double> phi(u_values.begin(), u_values.end());
    std::vector<double> gain(static_cast<size_t>(n));
    double eta = eta_start;

    // The plain phi sweep has Jacobian eigenvalues -sum_j (phi_j-phi_i)_+
    // lambda_j / (eta delta), which leave the unit disk once the value
    // spread exceeds eta*delta; an under-relaxed sweep keeps the same fixed
    // point and contracts for small enough beta. Start undamped and back off
    // only when the residual stops improving.
    double beta = 1.0;
    double best_residual = std::numeric_limits<double>::infinity();
    int best_iter = 0;

    // The coupled spread<->eta feedback can leave a near-unit geometric
    // mode; Aitken extrapolation of the eta tail (sampled every 10
    // iterations to average out oscillatory jitter) collapses it without
    // moving the fixed point.
    double eta_window[3] = {};
    int window_fill = 0;
    int last_accel = 0;

    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < params.max_iter; ++iter) {
        // gain_i = sum_j ((phi_j - phi_i)_+)^2 lambda_j, and the double sum
        // weighted by lambda_i on top; one fused O(n^2) pass.
        double double_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double phi_i = phi[static_cast<size_t>(i)];
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                double d = phi[static_cast<size_t>(j)] - phi_i;
                if (d > 0.0) acc += d * d * lambda[j];
            }
            gain[static_cast<size_t>(i)] = acc;
            double_sum += lambda[i] * acc;
        }

        // Residuals of the current pair in the two equations.
        double res_phi = 0.0;
        double inv_2ed = 1.0 / (2.0 * eta * params.delta);
        for (int i = 0; i < n; ++i) {
            double next = u_values[i] + gain[static_cast<size_t>(i)] * inv_2ed;
            res_phi = std::max(res_phi,
                               std::abs(next - phi[static_cast<size_t>(i)]));
        }
        double cost = double_sum / (2.0 * eta * eta) +
                      params.chi / std::pow(eta, 2.0 + params.xi);
        double res_constraint = std::abs(cost - params.epsilon);

        double eta_target = std::sqrt(
            double_sum / (2.0 * params.epsilon) +
            params.chi / (params.epsilon * std::pow(eta, params.xi)));
        double eta_next = r * eta + (1.0 - r) * eta_target;

        residual = std::max(res_phi, res_constraint);
        if (res_phi <= params.tol && res_constraint <= params.tol &&
            std::abs(eta_next - eta) <= params.tol) {
            check_phi_bounds(phi, u_max);
            auto [lo, hi] = eta_bounds_quadratic(u_max, params.epsilon,
                                                 params.chi, params.xi);
            if (eta < lo * (1.0 - 1e-9) || eta > hi * (1.0 + 1e-9)) {
                throw Error("quadratic-case eta " + std::to_string(eta) +
                            " escaped its analytic bounds [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
            }
            return HjbSolution{std::move(phi), eta, iter, residual};
        }

        if (residual < best_residual * (1.0 - 1e-3)) {
            best_residual = residual;
            best_iter = iter;
        } else if (iter - best_iter > 40 && beta > 0.0625) {
            beta *= 0.5;
            best_iter = iter;
        }

        if (iter % 10 == 0 && iter - last_accel >= 30) {
            eta_window[window_fill % 3] = eta_next;
            ++window_fill;
            if (window_fill >= 3) {
                double w0 = eta_window[(window_fill - 3) % 3];
                double w1 = eta_window[(window_fill - 2) % 3];
                double w2 = eta_window[(window_fill - 1) % 3];
                double d1 = w1 - w0;
                double d2 = w2 - w1;
                if (d1 != 0.0) {
                    double ratio = d2 / d1;
                    if (ratio > 0.5 && ratio < 0.9999 &&
                        std::abs(d2) > 64.0 * params.tol) {
                        double limit = w2 + d2 * ratio / (1.0 - ratio);
                        if (limit > 0.0 && std::abs(limit - w2) < 0.5 * w2) {
                            eta_next = limit;
                            last_accel = iter;
                            window_fill = 0;
                        }
                    }
                }
            }
        }

        for (int i = 0; i < n; ++i) {
            double target = u_values[i] + gain[static_cast<size_t>(i)] * inv_2ed;
            phi[static_cast<size_t>(i)] += beta * (target - phi[static_cast<size_t>(i)]);
        }
        eta = eta_next;
    }
    throw MaxIterExceeded("quadratic HJB solve did not converge",
                          params.max_iter, residual);
}

std::vector<double> phi_logit_closed_form(std::span<const double> u_values,
                                          double eta, double delta,
                                          const Grid& grid) {
    if (!(eta > 0.0)) throw InvalidParams("eta must be > 0");
    if (!(delta > 0.0)) throw InvalidParams("delta must be > 0");
    if (static_cast<int>(u_values.size()) != grid.cell_count()) {
        throw InvalidParams("utility size does not match grid");
    }
    double front = delta / (delta + 1.0);
    size_t n = u_values.size();
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = front * u_values[i];

    std::vector<double> scratch;
    double log_z = tilted_pdf(w, eta, grid.cell_area(), scratch);

    std::vector<double> phi(n);
    double offset = eta / delta * log_z;
    for (size_t i = 0; i < n; ++i) phi[i] = w[i] + offset;
    return phi;
}

double entropic_cost(std::span<const double> u_values, double eta, double delta,
                     const Grid& grid) {
    if (!(eta > 0.0)) throw InvalidParams("eta must be > 0");
    if (!(delta > 0.0)) throw InvalidParams("delta must be > 0");
    if (static_cast<int>(u_values.size()) != grid.cell_count()) {
        throw InvalidParams("utility size does not match grid");
    }
    return logit_cost_stats(u_values, eta, delta, grid).cost;
}

EtaSolveResult solve_eta_logit(std::span<const double> u_values,
                               const HjbParams& params, const Grid& grid) {
    return solve_eta_logit(u_values, params, grid, params.eta_init);
}

EtaSolveResult solve_eta_logit(std::span<const double> u_values,
                               const HjbParams& params, const Grid& grid,
                               double eta_start) {
    params.validate(/*quadratic_case=*/false);
    validate_nonnegative(u_values);
    if (static_cast<int>(u_values.size()) != grid.cell_count()) {
        throw InvalidParams("utility size does not match grid");
    }
    if (!(eta_start > 0.0)) throw InvalidParams("eta warm start must be > 0");

    auto [u_lo, u_hi] = std::minmax_element(u_values.begin(), u_values.end());
    if (*u_hi - *u_lo <= 1e-12) {
        throw NoSolution(
            "entropic cost of a constant utility is identically 0 < epsilon");
    }
    // Attainable supremum of the cost: the eta -> 0 limit concentrates the
    // tilted density on the maximizing cells.
    int top_cells = static_cast<int>(std::count(u_values.begin(), u_values.end(), *u_hi));
    double cost_sup = std::log(1.0 / (top_cells * grid.cell_area()));
    if (params.epsilon >= cost_sup) {
        throw NoSolution("exploration budget " + std::to_string(params.epsilon) +
                         " is not attainable; the cost supremum on this grid is " +
                         std::to_string(cost_sup));
    }

    const double front = params.delta / (params.delta + 1.0);
    const double r = params.relax;
    double eta = eta_start;
    int used = 0;

    // Relaxed fixed-point stage.
    for (; used < params.max_iter; ++used) {
        CostStats stats = logit_cost_stats(u_values, eta, params.delta, grid);
        double g = front * stats.mean_u / (params.epsilon + stats.log_z);
        double next = r * eta + (1.0 - r) * g;
        double step_size = std::abs(next - eta);
        eta = next;
        if (step_size <= params.tol) break;
    }
    if (used == params.max_iter) {
        throw MaxIterExceeded("logit eta iteration did not converge",
                              params.max_iter, params.tol);
    }

    // Newton polish on the cost residual; d(cost)/d(eta) = -Var_q(W)/eta^3.
    const double res_tol = 0.1 * params.tol;
    double best_eta = eta;
    double best_err = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
        CostStats stats = logit_cost_stats(u_values, eta, params.delta, grid);
        double err = stats.cost - params.epsilon;
        if (std::abs(err) < best_err) {
            best_err = std::abs(err);
            best_eta = eta;
        }
        if (std::abs(err) <= res_tol) break;
        if (!(stats.var_w > 0.0)) break;
        double step = err * eta * eta * eta / stats.var_w;
        step = std::clamp(step, -0.5 * eta, 0.5 * eta);
        double next = eta + step;
        if (next == eta) break;  // step below representable resolution
        eta = next;
    }
    if (best_err > 10.0 * res_tol) {
        throw MaxIterExceeded("logit eta polish stalled", used, best_err);
    }
    return EtaSolveResult{best_eta, used, best_err};
}

HjbSolution solve_hjb_logit(std::span<const double> u_values,
                            const HjbParams& params, const Grid& grid,
                            double u_max, double eta_start) {
    EtaSolveResult eta = solve_eta_logit(u_values, params, grid, eta_start);
    std::vector<double> phi =
        phi_logit_closed_form(u_values, eta.eta, params.delta, grid);
    check_phi_bounds(phi, u_max);
    return HjbSolution{std::move(phi), eta.eta, eta.iterations, eta.residual};
}

std::pair<double, double> eta_bounds_quadratic(double u_max, double epsilon,
                                               double chi, double xi) {
    if (!(chi > 0.0)) throw InvalidParams("eta bounds require chi > 0");
    if (!(epsilon > 0.0)) throw InvalidParams("eta bounds require epsilon > 0");
    double inv_power = 1.0 / (2.0 + xi);
    double lo = std::pow(chi / epsilon, inv_power);
    double budget = (u_max * u_max + chi) / epsilon;
    double hi = std::max(std::sqrt(budget), std::pow(budget, inv_power));
    return {lo, hi};
}

double eta_bisection_oracle(const std::function<double(double)>& cost_fn,
                            double epsilon, double bracket_lo,
                            double bracket_hi) {
    if (!(bracket_lo > 0.0) || !(bracket_hi > bracket_lo)) {
        throw BracketError("bracket must satisfy 0 < lo < hi");
    }
    double f_lo = cost_fn(bracket_lo);
    double f_hi = cost_fn(bracket_hi);
    if (!(f_lo > epsilon) || !(f_hi < epsilon)) {
        throw BracketError("bracket does not straddle the target cost: cost(" +
                           std::to_string(bracket_lo) + ") = " + std::to_string(f_lo) +
                           ", cost(" + std::to_string(bracket_hi) + ") = " +
                           std::to_string(f_hi));
    }
    double lo = bracket_lo;
    double hi = bracket_hi;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (cost_fn(mid) > epsilon) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace egd
