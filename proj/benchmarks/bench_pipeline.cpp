#include <benchmark/benchmark.h>

#include "hesslv/exponents.hpp"
#include "hesslv/integrate.hpp"
#include "hesslv/ivp.hpp"
#include "hesslv/params.hpp"
#include "hesslv/solutions.hpp"

namespace {

const hesslv::Params set_a = hesslv::validate_params(5, 1, 0.0, 3.0);
const hesslv::Params set_b = hesslv::validate_params(12, 1, 0.0, 5.0);

void BM_ExponentReport(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(hesslv::exponent_report(set_b));
}
BENCHMARK(BM_ExponentReport);

void BM_OrbitSpiral(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(hesslv::integrate_orbit(set_a));
}
BENCHMARK(BM_OrbitSpiral)->Unit(benchmark::kMillisecond);

void BM_OrbitNode(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(hesslv::integrate_orbit(set_b));
}
BENCHMARK(BM_OrbitNode)->Unit(benchmark::kMillisecond);

void BM_SolveIvp(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(hesslv::solve_ivp(set_b, 1000.0));
}
BENCHMARK(BM_SolveIvp)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
    const hesslv::Orbit orbit = hesslv::integrate_orbit(set_b);
    const double t0 = hesslv::level_crossings(orbit, 2.0, set_b).front();
    for (auto _ : state)
        benchmark::DoNotOptimize(hesslv::reconstruct_solution(orbit, t0, set_b));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

void BM_LevelCrossings(benchmark::State& state) {
    const hesslv::Orbit orbit = hesslv::integrate_orbit(set_a);
    for (auto _ : state)
        benchmark::DoNotOptimize(hesslv::level_crossings(orbit, 2.0, set_a));
}
BENCHMARK(BM_LevelCrossings)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
