#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "plaw/duality.hpp"
#include "plaw/integrate.hpp"
#include "plaw/jmetric.hpp"
#include "plaw/scatterlab.hpp"

using namespace plaw;

namespace {

constexpr double pi = std::numbers::pi;

Trajectory kepler_orbit(double h) {
    const PowerLawProblem p(1, 1);
    IntegratorConfig cfg{.rel_tol = 1e-12, .abs_tol = 1e-14};
    cfg.output_interval = h;
    return integrate(p, pericenter_state(p, -0.5, 0.5), std::ceil(2 * pi / h) * h, cfg);
}

void BM_IntegrateKeplerPeriod(benchmark::State& state) {
    const PowerLawProblem p(1, 1);
    const IntegratorConfig cfg{.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(p, pericenter_state(p, -0.5, 0.5), 2 * pi, cfg));
    }
}
BENCHMARK(BM_IntegrateKeplerPeriod)->Arg(8)->Arg(10)->Arg(12);

void BM_NearCollisionNewtonian(benchmark::State& state) {
    const PowerLawProblem p(1, 1);
    const IntegratorConfig cfg{.rel_tol = 1e-12};
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(p, pericenter_state(p, -0.5, 1e-3), 2 * pi, cfg));
    }
}
BENCHMARK(BM_NearCollisionNewtonian);

void BM_NearCollisionFictitious(benchmark::State& state) {
    const PowerLawProblem p(1, 1);
    const IntegratorConfig cfg{.rel_tol = 1e-12};
    // One radial period is 2 pi in t and 2 pi / 4 in tau for a = 1.
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_fictitious(p, pericenter_state(p, -0.5, 1e-3), pi / 2, cfg));
    }
}
BENCHMARK(BM_NearCollisionFictitious);

void BM_Deflection(benchmark::State& state) {
    const PowerLawProblem p(0.5, 1);
    for (auto _ : state) benchmark::DoNotOptimize(deflection(p, 1, 0.7));
}
BENCHMARK(BM_Deflection);

void BM_LobeAngle(benchmark::State& state) {
    const PowerLawProblem p(2.0 / 3, 1);
    const double J = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lobe_angle(p, -1, J));
}
BENCHMARK(BM_LobeAngle)->Arg(1)->Arg(2);

void BM_TransformInverse(benchmark::State& state) {
    const PlaneCurve q = position_curve(kepler_orbit(1e-3));
    const DualityMap m(1, -0.5, 1);
    for (auto _ : state) benchmark::DoNotOptimize(transform_inverse(m, q));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(q.size()));
}
BENCHMARK(BM_TransformInverse);

void BM_GeodesicResidual(benchmark::State& state) {
    const Trajectory t = kepler_orbit(1e-3);
    const JMMetric m(PowerLawProblem(1, 1), -0.5);
    for (auto _ : state) benchmark::DoNotOptimize(geodesic_residual(m, t));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(t.size()));
}
BENCHMARK(BM_GeodesicResidual);

}  // namespace

BENCHMARK_MAIN();
