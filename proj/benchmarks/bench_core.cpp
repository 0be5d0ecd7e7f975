// Microbenchmarks for the hot kernels: raw Philox blocks, normal draws,
// one SDE step per scheme, the generator closed form, a drift scan, and a
// short end-to-end batch. Run ./wfrec_bench --benchmark_min_time=0.5 for
// quick numbers; items/s on the step benchmarks is SDE steps per second.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "wfrec/drift_scan.hpp"
#include "wfrec/model.hpp"
#include "wfrec/planner.hpp"
#include "wfrec/rng.hpp"
#include "wfrec/sde.hpp"

namespace {

void BM_PhiloxBlock(benchmark::State& state) {
    std::array<std::uint64_t, 4> ctr{0, 7, 0, 0};
    const std::array<std::uint64_t, 2> key{20260816, 0x9e3779b97f4a7c15ull};
    for (auto _ : state) {
        ctr[0]++;
        benchmark::DoNotOptimize(wfrec::Philox4x64::block(ctr, key));
    }
    state.SetItemsProcessed(state.iterations() * 4);  // 4 words per block
}
BENCHMARK(BM_PhiloxBlock);

void BM_NormalDraw(benchmark::State& state) {
    wfrec::NormalStream stream(20260816, 0);
    for (auto _ : state) benchmark::DoNotOptimize(stream.next());
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NormalDraw);

void bench_step(benchmark::State& state, wfrec::Scheme scheme) {
    const wfrec::ModelParams p(1.0, 1.0, 1.0);
    wfrec::SimConfig cfg;
    cfg.scheme = scheme;
    cfg.dt = 1e-4;
    wfrec::NormalStream stream(20260816, 0);
    double x = 0.5;
    std::uint64_t clamps = 0;
    for (auto _ : state) {
        x = wfrec::step(p, cfg, x, stream.next(), clamps);
        benchmark::DoNotOptimize(x);
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_StepEulerClamp(benchmark::State& state) {
    bench_step(state, wfrec::Scheme::EulerClamp);
}
void BM_StepEulerReflect(benchmark::State& state) {
    bench_step(state, wfrec::Scheme::EulerReflect);
}
void BM_StepLamperti(benchmark::State& state) {
    bench_step(state, wfrec::Scheme::Lamperti);
}
BENCHMARK(BM_StepEulerClamp);
BENCHMARK(BM_StepEulerReflect);
BENCHMARK(BM_StepLamperti);

void BM_GeneratorApply(benchmark::State& state) {
    const wfrec::ModelParams p(1.0, 1.0, 1.0);
    const wfrec::LyapunovSpec spec(wfrec::LyapunovKind::LowerEnd, 0.5, 1.0);
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wfrec::generator_apply(p, spec, 0.0, x));
        x = x < 0.03 ? x + 1e-6 : 0.01;  // sweep a small window
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GeneratorApply);

void BM_DriftScan1000(benchmark::State& state) {
    const wfrec::ModelParams p(1.0, 1.0, 1.0);
    const wfrec::RecurrencePlan plan = wfrec::plan_recurrence(p, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            wfrec::scan_recurrence_drift(p, plan, 1000, false));
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_DriftScan1000);

void BM_BatchTauAlpha(benchmark::State& state) {
    const wfrec::ModelParams p(1.0, 1.0, 1.0);
    wfrec::SimConfig cfg;
    cfg.scheme = wfrec::Scheme::EulerClamp;
    cfg.dt = 1e-3;
    cfg.t_max = 1.0;
    cfg.n_paths = 64;
    const wfrec::StoppingSpec stop = wfrec::StoppingSpec::tau_alpha(0.25);
    std::uint64_t steps = 0;
    for (auto _ : state) {
        const auto records = wfrec::run_batch(p, cfg, 0.01, stop, {}, 1);
        benchmark::DoNotOptimize(records.data());
        for (const auto& r : records)
            steps += (std::uint64_t)(r.stop_time / cfg.dt);
    }
    state.SetItemsProcessed((std::int64_t)steps);
}
BENCHMARK(BM_BatchTauAlpha);

}  // namespace

BENCHMARK_MAIN();
