#include <benchmark/benchmark.h>

#include <vector>

#include "egd/dynamics.hpp"
#include "egd/utility.hpp"

namespace {

void PairwiseStep(benchmark::State& state) {
    egd::Grid grid = egd::Grid::line(static_cast<int>(state.range(0)));
    egd::Density mu = egd::Density::uniform(grid);
    egd::LambdaWeights lambda = egd::LambdaWeights::pairwise_mixture(0.0, mu);
    std::vector<double> phi =
        egd::eval_utility_1d(egd::UtilitySpec::resource(), grid, mu);
    for (auto _ : state) {
        egd::Density next = egd::step_pairwise(mu, phi, 0.5, lambda, 0.005);
        benchmark::DoNotOptimize(next.masses().data());
    }
}
BENCHMARK(PairwiseStep)->Arg(250)->Arg(500);

void LogitStep1D(benchmark::State& state) {
    egd::Grid grid = egd::Grid::line(static_cast<int>(state.range(0)));
    egd::Density mu = egd::Density::uniform(grid);
    std::vector<double> phi =
        egd::eval_utility_1d(egd::UtilitySpec::resource(), grid, mu);
    for (auto _ : state) {
        egd::Density next = egd::step_logit(mu, phi, 0.1, 0.005);
        benchmark::DoNotOptimize(next.masses().data());
    }
}
BENCHMARK(LogitStep1D)->Arg(250)->Arg(500);

void LogitStep2D(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    egd::Grid grid = egd::Grid::box(n, n);
    egd::Density mu = egd::Density::uniform(grid);
    std::vector<double> phi =
        egd::eval_utility_2d(egd::UtilitySpec::resource2d(), grid, mu);
    for (auto _ : state) {
        egd::Density next = egd::step_logit(mu, phi, 0.1, 0.005);
        benchmark::DoNotOptimize(next.masses().data());
    }
}
BENCHMARK(LogitStep2D)->Arg(100)->Arg(250);

}  // namespace
