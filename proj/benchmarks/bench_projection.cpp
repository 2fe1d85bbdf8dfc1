#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mixext/tensor_poly.hpp"

using namespace mixext;

namespace {

double smooth(std::span<const double> x) {
    return std::sin(std::numbers::pi * x[0]) * std::exp(x[1]);
}

Cell unit_cell2() {
    Cell c;
    c.dim = 2;
    c.delta[0] = c.delta[1] = 1.0;
    return c;
}

}  // namespace

static void ProjectDegree1(benchmark::State& state) {
    const int quad = static_cast<int>(state.range(0));
    const Cell cell = unit_cell2();
    for (auto _ : state) {
        benchmark::DoNotOptimize(project(smooth, cell, MultiIndex{1, 1}, quad));
    }
}
BENCHMARK(ProjectDegree1)->Arg(4)->Arg(8)->Arg(16);

static void PolynomialEval(benchmark::State& state) {
    const TensorPolynomial p = project(smooth, unit_cell2(), MultiIndex{3, 3}, 8);
    double x[2] = {0.3, 0.4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(p(std::span<const double>(x, 2)));
        x[0] += 1e-4;
        if (x[0] > 1.0) x[0] = 0.0;
    }
}
BENCHMARK(PolynomialEval);
