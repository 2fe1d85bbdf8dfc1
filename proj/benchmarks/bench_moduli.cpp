#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mixext/moduli.hpp"

using namespace mixext;

namespace {

double smooth(std::span<const double> x) {
    return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
}

}  // namespace

static void AveragedModulus(benchmark::State& state) {
    const auto D = DomainDescriptor::named("cube2d");
    ModulusQuery q;
    q.l = MultiIndex{2, 2};
    q.J = SubsetMask::full(2);
    q.t[0] = q.t[1] = 0.25;
    q.p = 2.0;
    q.xi_nodes = 4;
    q.x_res_log2 = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(omega_avg(smooth, D, q));
    }
}
BENCHMARK(AveragedModulus)->Arg(4)->Arg(5)->Arg(6);

static void ShrunkenMembership(benchmark::State& state) {
    const auto D = DomainDescriptor::named("lshape2d");
    const MultiIndex l{2, 2};
    const double h[2] = {0.12, -0.07};
    double x[2] = {0.9, 0.8};
    for (auto _ : state) {
        benchmark::DoNotOptimize(shrunken_contains(D, std::span<const double>(x, 2), l,
                                                   std::span<const double>(h, 2)));
        x[0] += 1e-4;
        if (x[0] > 1.9) x[0] = 0.05;
    }
}
BENCHMARK(ShrunkenMembership);
