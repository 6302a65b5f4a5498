#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "egd/density.hpp"
#include "egd/hjb.hpp"
#include "egd/utility.hpp"

namespace {

std::vector<double> resource_utility(const egd::Grid& grid) {
    egd::Density uniform = egd::Density::uniform(grid);
    return egd::eval_utility_1d(egd::UtilitySpec::resource(), grid, uniform);
}

void QuadraticSolve(benchmark::State& state) {
    egd::Grid grid = egd::Grid::line(static_cast<int>(state.range(0)));
    egd::Density uniform = egd::Density::uniform(grid);
    std::vector<double> u = resource_utility(grid);
    egd::LambdaWeights lambda = egd::LambdaWeights::pairwise_mixture(0.0, uniform);
    egd::HjbParams params;
    params.delta = 1.0;
    params.epsilon = 0.1;
    params.chi = 1e-5;
    params.xi = 2.0;
    double u_max = egd::UtilitySpec::resource().u_max(grid);
    for (auto _ : state) {
        egd::HjbSolution sol = egd::solve_hjb_quadratic(u, lambda, params, u_max);
        benchmark::DoNotOptimize(sol.eta);
    }
}
BENCHMARK(QuadraticSolve)->Arg(50)->Arg(250)->Arg(500);

void LogitEtaSolve(benchmark::State& state) {
    egd::Grid grid = egd::Grid::line(static_cast<int>(state.range(0)));
    std::vector<double> u = resource_utility(grid);
    egd::HjbParams params;
    params.delta = 1.0;
    params.epsilon = 0.375;
    for (auto _ : state) {
        egd::EtaSolveResult sol = egd::solve_eta_logit(u, params, grid);
        benchmark::DoNotOptimize(sol.eta);
    }
}
BENCHMARK(LogitEtaSolve)->Arg(50)->Arg(250)->Arg(500);

void LogitEtaSolveWarm(benchmark::State& state) {
    egd::Grid grid = egd::Grid::line(250);
    std::vector<double> u = resource_utility(grid);
    egd::HjbParams params;
    params.delta = 1.0;
    params.epsilon = 0.375;
    double warm = egd::solve_eta_logit(u, params, grid).eta;
    for (auto _ : state) {
        egd::EtaSolveResult sol = egd::solve_eta_logit(u, params, grid, warm);
        benchmark::DoNotOptimize(sol.eta);
    }
}
BENCHMARK(LogitEtaSolveWarm);

}  // namespace

BENCHMARK_MAIN();
