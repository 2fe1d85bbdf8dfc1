#include <benchmark/benchmark.h>

#include "mixext/bspline.hpp"

using namespace mixext;

static void SplineValue(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    double x = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_psi(m, 0, x));
        x += 0.001;
        if (x > m + 1.0) x = 0.05;
    }
}
BENCHMARK(SplineValue)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

static void SplineDerivative(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    double x = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_psi(m, 1, x));
        x += 0.001;
        if (x > m + 1.0) x = 0.05;
    }
}
BENCHMARK(SplineDerivative)->Arg(2)->Arg(4);

static void DilatedTranslate2D(benchmark::State& state) {
    const MultiIndex kappa{3, 3};
    const MultiIndex nu{2, 5};
    const MultiIndex m{2, 2};
    const MultiIndex lambda{0, 0};
    double x[2] = {0.3, 0.71};
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_g(kappa, nu, m, lambda, std::span<const double>(x, 2)));
        x[0] += 1e-4;
        if (x[0] > 1.0) x[0] = 0.0;
    }
}
BENCHMARK(DilatedTranslate2D);
