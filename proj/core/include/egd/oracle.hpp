#pragma once

#include <functional>
#include <span>
#include <vector>

#include "egd/grid.hpp"
#include "egd/hjb.hpp"

namespace egd {

/// Bisection with the default bracket [1e-6, 10 u_max^2 / eps], widened
/// geometrically when the initial bracket does not straddle the target.
/// Throws NoSolution when no widening can straddle it (the cost never
/// reaches epsilon).
double eta_bisection_auto(const std::function<double(double)>& cost_fn,
                          double epsilon, double u_max);

/// Reference re-solve of the quadratic-cost system, algorithmically
/// independent of solve_hjb_quadratic: damped Picard sweeps for phi
/// alternated with bisection for eta on the cost constraint at frozen phi.
/// Used to cross-check Algorithm-1-style solves; run it at a tolerance
/// tighter than the solve under test.
HjbSolution solve_hjb_quadratic_picard(std::span<const double> u_values,
                                       const LambdaWeights& lambda,
                                       const HjbParams& params, double u_max,
                                       double damping = 0.5);

}  // namespace egd
