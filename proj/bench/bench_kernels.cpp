// Parallel kernels against their serial references.

#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "snrlab/bayes.hpp"
#include "snrlab/harness.hpp"
#include "snrlab/stats.hpp"

using namespace snrlab;

static void BM_DesignSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        RngStream rng(1, 1);
        benchmark::DoNotOptimize(gen_design_serial(n, 2 * n, rng));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n));
}
BENCHMARK(BM_DesignSerial)->Arg(250)->Arg(500);

static void BM_DesignParallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        RngStream rng(1, 1);
        benchmark::DoNotOptimize(gen_design(n, 2 * n, rng));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n));
}
BENCHMARK(BM_DesignParallel)->Args({250, 1})->Args({500, 1})->Args({500, 4});

static void BM_MeanNaive(benchmark::State& state) {
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    RngStream(2, 2).fill_normals(v);
    for (auto _ : state) benchmark::DoNotOptimize(mean_se_naive(v));
}
BENCHMARK(BM_MeanNaive)->Arg(1 << 16);

static void BM_MeanPairwise(benchmark::State& state) {
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    RngStream(2, 2).fill_normals(v);
    for (auto _ : state) benchmark::DoNotOptimize(mean_se(v));
}
BENCHMARK(BM_MeanPairwise)->Arg(1 << 16);

static void BM_BssExhaustive(benchmark::State& state) {
    const Dataset d = gen_dataset(30, 16, ParamSpace(4, 1.0, 1.0), RngStream(3, 3));
    for (auto _ : state) benchmark::DoNotOptimize(bss_fit(d.X, d.y, 4, BssMode::Exhaustive));
}
BENCHMARK(BM_BssExhaustive);

static void BM_BssBranchAndBound(benchmark::State& state) {
    const Dataset d = gen_dataset(30, 16, ParamSpace(4, 1.0, 1.0), RngStream(3, 3));
    for (auto _ : state) benchmark::DoNotOptimize(bss_fit(d.X, d.y, 4, BssMode::BranchAndBound));
}
BENCHMARK(BM_BssBranchAndBound);

static void BM_Sweep(benchmark::State& state) {
    SweepConfig c;
    c.n = 100;
    c.p = 200;
    c.k = 5;
    c.inv_snr = {0.5, 2.0};
    c.trials = 8;
    c.grid_points = 10;
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(c));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_SpikeDiagnostics(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(spike_diagnostics_mc(200, 200, 1.5, 16, RngStream(4, 4)));
}
BENCHMARK(BM_SpikeDiagnostics)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
