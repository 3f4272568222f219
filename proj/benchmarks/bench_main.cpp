#include <benchmark/benchmark.h>

#include "qsa/analytic.hpp"
#include "qsa/circular_kernel.hpp"
#include "qsa/rng.hpp"
#include "qsa/sde.hpp"
#include "qsa/sinh_kernel.hpp"
#include "qsa/specfun.hpp"

namespace {

void BM_PhiloxGaussian(benchmark::State& state) {
    qsa::GaussianStream g(42, 1);
    double acc = 0.0;
    for (auto _ : state) acc += g.next();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PhiloxGaussian);

void BM_RadialStep(benchmark::State& state) {
    const qsa::RadialScheme scheme{qsa::Space::Hyperbolic, 1, 1e-3};
    qsa::GaussianStream g(42, 2);
    double r = 1e-4;
    const double sq = std::sqrt(1e-3);
    for (auto _ : state) r = scheme.step(r, sq * g.next());
    benchmark::DoNotOptimize(r);
}
BENCHMARK(BM_RadialStep);

void BM_HyperbolicKernelEval(benchmark::State& state) {
    const qsa::HyperbolicHeatKernel kernel(int(state.range(0)));
    double x = 0.3, acc = 0.0;
    for (auto _ : state) {
        acc += kernel(1.0, x);
        x = x < 8.0 ? x + 0.37 : 0.3;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_HyperbolicKernelEval)->Arg(1)->Arg(2);

void BM_CircularKernelEval(benchmark::State& state) {
    const qsa::CircularJacobiKernel kernel(1.0, 1.0, double(state.range(0)) / 100.0);
    double r = 0.1, acc = 0.0;
    for (auto _ : state) {
        acc += kernel(r);
        r = r < 1.5 ? r + 0.083 : 0.1;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_CircularKernelEval)->Arg(10)->Arg(100);

void BM_BesselK2(benchmark::State& state) {
    double v = 0.1, acc = 0.0;
    for (auto _ : state) {
        acc += qsa::bessel_k2_scaled(v);
        v = v < 40.0 ? v * 1.7 : 0.1;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_BesselK2);

void BM_ProjCfSeries(benchmark::State& state) {
    const qsa::CharFnQuery q{qsa::Space::Projective, 1, 0.5, {0.6, 0.8, 0.0}};
    double acc = 0.0;
    for (auto _ : state) acc += qsa::proj_cf_series(q);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_ProjCfSeries);

void BM_AmbientSphereStep(benchmark::State& state) {
    const qsa::SimConfig cfg{qsa::Space::Projective, int(state.range(0)), 0.05, 1e-3, 1, 9};
    for (auto _ : state) {
        const auto res = qsa::simulate_ambient_sphere(cfg, 3);
        benchmark::DoNotOptimize(res.sample.a.vI);
    }
    state.SetItemsProcessed(state.iterations() * cfg.steps());
}
BENCHMARK(BM_AmbientSphereStep)->Arg(1)->Arg(2);

} // namespace

BENCHMARK_MAIN();
