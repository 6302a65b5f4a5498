#include "egd/oracle.hpp"

#include <cmath>
#include <limits>

#include "egd/errors.hpp"

namespace egd {

double eta_bisection_auto(const std::function<double(double)>& cost_fn,
                          double epsilon, double u_max) {
    double lo = 1e-6;
    double hi = 10.0 * u_max * u_max / epsilon;
    for (int attempt = 0; attempt < 40; ++attempt) {
        double f_lo = cost_fn(lo);
        double f_hi = cost_fn(hi);
        if (f_lo > epsilon && f_hi < epsilon) {
            return eta_bisection_oracle(cost_fn, epsilon, lo, hi);
        }
        if (!(f_lo > epsilon)) lo /= 16.0;
        if (!(f_hi < epsilon)) hi *= 16.0;
        if (lo < 1e-300 || hi > 1e300) break;
    }
    throw NoSolution("no eta bracket straddles the requested cost " +
                     std::to_string(epsilon));
}

HjbSolution solve_hjb_quadratic_picard(std::span<const double> u_values,
                                       const LambdaWeights& lambda,
                                       const HjbParams& params, double u_max,
                                       double damping) {
    params.validate(/*quadratic_case=*/true);
    if (!(damping > 0.0) || damping > 1.0) {
        throw InvalidParams("picard damping must be in (0, 1]");
    }
    const int n = static_cast<int>(u_values.size());
    std::vector<double> phi(u_values.begin(), u_values.end());
    std::vector<double> sweep(static_cast<size_t>(n));

    auto pair_sum = [&](const std::vector<double>& f) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double d = f[static_cast<size_t>(j)] - f[static_cast<size_t>(i)];
                if (d > 0.0) total += d * d * lambda[i] * lambda[j];
            }
        }
        return total;
    };
    auto constraint_cost = [&](double s, double eta) {
        return s / (2.0 * eta * eta) +
               params.chi / std::pow(eta, 2.0 + params.xi);
    };

    auto [eta_lo, eta_hi] = eta_bounds_quadratic(u_max, params.epsilon,
                                                 params.chi, params.xi);
    double eta = std::clamp(params.eta_init, eta_lo, eta_hi);

    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 20 * params.max_iter; ++iter) {
        double s = pair_sum(phi);

        // Eta from the constraint at frozen phi, by bisection. The cost is
        // strictly decreasing in eta, and the analytic bounds bracket the
        // root (cost(lo) >= eps >= cost(hi) up to roundoff).
        double lo = eta_lo * 0.5;
        double hi = eta_hi * 2.0;
        for (int b = 0; b < 200 && (hi - lo) > 1e-15 * hi; ++b) {
            double mid = 0.5 * (lo + hi);
            if (constraint_cost(s, mid) > params.epsilon) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        eta = 0.5 * (lo + hi);

        double res_phi = 0.0;
        for (int i = 0; i < n; ++i) {
            const double phi_i = phi[static_cast<size_t>(i)];
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                double d = phi[static_cast<size_t>(j)] - phi_i;
                if (d > 0.0) acc += d * d * lambda[j];
            }
            double target = u_values[i] + acc / (2.0 * eta * params.delta);
            sweep[static_cast<size_t>(i)] = target;
            res_phi = std::max(res_phi, std::abs(target - phi_i));
        }
        residual = std::max(res_phi,
                            std::abs(constraint_cost(s, eta) - params.epsilon));
        if (residual <= params.tol) {
            return HjbSolution{std::move(phi), eta, iter, residual};
        }
        for (int i = 0; i < n; ++i) {
            phi[static_cast<size_t>(i)] =
                (1.0 - damping) * phi[static_cast<size_t>(i)] +
                damping * sweep[static_cast<size_t>(i)];
        }
    }
    throw MaxIterExceeded("picard reference solve did not converge",
                          20 * params.max_iter, residual);
}

}  // namespace egd
