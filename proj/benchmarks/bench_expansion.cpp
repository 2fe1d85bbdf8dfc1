#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mixext/operators.hpp"

using namespace mixext;

namespace {

double smooth(std::span<const double> x) {
    return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
}

}  // namespace

static void QuasiInterpolantBuild(benchmark::State& state) {
    const auto D = DomainDescriptor::named("cube2d");
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            quasi_interpolant(smooth, D, MultiIndex{k, k}, MultiIndex{1, 1}, MultiIndex{2, 2}));
    }
    state.SetComplexityN(1 << k);
}
BENCHMARK(QuasiInterpolantBuild)->Arg(2)->Arg(3)->Arg(4)->Arg(5)->Complexity();

static void ExpansionEvaluate(benchmark::State& state) {
    const auto D = DomainDescriptor::named("cube2d");
    const SplineExpansion e =
        quasi_interpolant(smooth, D, MultiIndex{4, 4}, MultiIndex{1, 1}, MultiIndex{2, 2});
    double x[2] = {0.21, 0.53};
    for (auto _ : state) {
        benchmark::DoNotOptimize(e(std::span<const double>(x, 2)));
        x[0] += 1e-4;
        if (x[0] > 1.0) x[0] = 0.0;
    }
}
BENCHMARK(ExpansionEvaluate);

static void TelescopeBlockBuild(benchmark::State& state) {
    const auto D = DomainDescriptor::named("lshape2d");
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        ProjectionCache cache;
        benchmark::DoNotOptimize(
            telescope_block(smooth, D, MultiIndex{k, k}, MultiIndex{1, 1}, MultiIndex{2, 2}, 0,
                            &cache));
    }
}
BENCHMARK(TelescopeBlockBuild)->Arg(1)->Arg(2)->Arg(3);
