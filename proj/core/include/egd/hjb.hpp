#pragma once

#include <functional>
#include <span>
#include <vector>

#include "egd/density.hpp"
#include "egd/grid.hpp"

namespace egd {

/// Parameters of the per-step value-function/multiplier solve.
struct HjbParams {
    double delta = 1.0;     ///< discount rate, > 0
    double epsilon = 0.375; ///< exploration-cost budget, > 0
    double chi = 0.0;       ///< regularization weight, > 0 for the quadratic case
    double xi = 0.0;        ///< regularization power, >= 0
    double relax = 0.05;    ///< relaxation factor r in (0, 1]
    double tol = 1e-10;     ///< iteration error threshold
    int max_iter = 10000;
    double eta_init = 1.0;  ///< multiplier guess for cold starts

    void validate(bool quadratic_case) const;
};

/// Switching weights lambda = w * uniform + (1 - w) * mu. w = 0 gives the
/// replicator weighting (lambda follows the population), w = 1 a fixed
/// full-support measure.
class LambdaWeights {
public:
    static LambdaWeights pairwise_mixture(double w, const Density& mu);
    static LambdaWeights from_weights(std::vector<double> weights);

    std::span<const double> weights() const { return weights_; }
    double operator[](int i) const { return weights_[static_cast<size_t>(i)]; }
    int size() const { return static_cast<int>(weights_.size()); }

private:
    explicit LambdaWeights(std::vector<double> weights)
        : weights_(std::move(weights)) {}
    std::vector<double> weights_;
};

/// Value function and optimal multiplier produced by a solve, plus solver
/// telemetry. residual is the worst equation residual of the returned pair.
struct HjbSolution {
    std::vector<double> phi;
    double eta = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

/// Quadratic-cost solve (BNN/replicator path). The returned pair satisfies,
/// within tol,
///
///   phi_i = U_i + 1/(2 eta delta) * sum_j ((phi_j - phi_i)_+)^2 lambda_j
///   eps   = 1/(2 eta^2) * sum_{i,j} ((phi_j - phi_i)_+)^2 lambda_i lambda_j
///           + chi / eta^(2+xi)
///
/// via the relaxed fixed-point iteration: phi sweeps with the old eta, then
///
///   eta <- r eta + (1-r) sqrt( sum_{i,j} (..)_+^2 lambda_i lambda_j / (2 eps)
///                              + chi / (eps eta^xi) )
///
/// whose fixed point is the constraint verbatim. Iterates start at
/// phi = u_values and eta = eta_start; the loop exits only once both
/// equation residuals are <= tol. Returns phi in [0, u_max] and eta inside
/// eta_bounds_quadratic, both verified.
HjbSolution solve_hjb_quadratic(std::span<const double> u_values,
                                const LambdaWeights& lambda,
                                const HjbParams& params, double u_max,
                                double eta_start);
HjbSolution solve_hjb_quadratic(std::span<const double> u_values,
                                const LambdaWeights& lambda,
                                const HjbParams& params, double u_max);

/// Closed-form logit value function,
///   phi_i = delta/(delta+1) U_i
///           + eta/delta * ln( sum_j exp(delta/(delta+1) U_j / eta) * area ),
/// evaluated through log-sum-exp so small eta cannot overflow.
std::vector<double> phi_logit_closed_form(std::span<const double> u_values,
                                          double eta, double delta,
                                          const Grid& grid);

/// Exploration cost of the logit protocol at multiplier eta: with
/// W_i = delta/(delta+1) U_i, Z = sum_j exp(W_j/eta) area and
/// q_i = exp(W_i/eta)/Z, returns sum_i q_i ln(q_i) area. The algebraically
/// equal form (1/eta) sum_i W_i q_i area - ln Z is evaluated alongside as a
/// consistency check; the two must agree within 1e-10.
double entropic_cost(std::span<const double> u_values, double eta, double delta,
                     const Grid& grid);

struct EtaSolveResult {
    double eta = 0.0;
    int iterations = 0;
    double residual = 0.0;  ///< |entropic_cost(eta) - epsilon|
};

/// Solves entropic_cost(U, eta) = epsilon for eta > 0. Runs the relaxed
/// fixed-point iteration
///   eta <- r eta + (1-r) * (delta/(delta+1)) <U>_q / (eps + ln Z)
/// until |d eta| <= tol, then polishes with safeguarded Newton steps on the
/// cost residual until |cost - eps| <= tol/10. The cost is strictly
/// decreasing in eta, so the root is unique. Constant utilities (spread
/// below 1e-12) have cost identically 0 and raise NoSolution, as do budgets
/// above the attainable supremum ln(1/(k*area)).
EtaSolveResult solve_eta_logit(std::span<const double> u_values,
                               const HjbParams& params, const Grid& grid,
                               double eta_start);
EtaSolveResult solve_eta_logit(std::span<const double> u_values,
                               const HjbParams& params, const Grid& grid);

/// Convenience wrapper: eta solve plus closed-form phi, with the same
/// bound checks as the quadratic path.
HjbSolution solve_hjb_logit(std::span<const double> u_values,
                            const HjbParams& params, const Grid& grid,
                            double u_max, double eta_start);

/// Analytic multiplier bounds for the quadratic case:
///   lo = (chi/eps)^(1/(2+xi))
///   hi = max(B^(1/2), B^(1/(2+xi))),  B = (u_max^2 + chi)/eps
/// Every converged quadratic solve lies inside, which the solver checks
/// and tests exploit for warm starts and property checks.
std::pair<double, double> eta_bounds_quadratic(double u_max, double epsilon,
                                               double chi, double xi);

/// Independent root finder used to cross-check the iterative eta solvers:
/// plain bisection for cost_fn(eta) = epsilon on a bracket with
/// cost_fn(lo) > epsilon > cost_fn(hi) (cost decreasing in eta). Returns
/// the midpoint of a bracket narrowed to 1e-12.
double eta_bisection_oracle(const std::function<double(double)>& cost_fn,
                            double epsilon, double bracket_lo,
                            double bracket_hi);

}  // namespace egd
