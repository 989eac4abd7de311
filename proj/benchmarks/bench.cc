#include <benchmark/benchmark.h>

#include "enverify/analytic.h"
#include "enverify/dense_sim.h"
#include "enverify/ghz.h"
#include "enverify/oracle.h"
#include "enverify/protocol.h"

using namespace enverify;

static void BM_rank2_full_float(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank2_delta_full(0.9, n));
    }
}
BENCHMARK(BM_rank2_full_float)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

static void BM_werner_full_float(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(werner_delta_full(0.9, n));
    }
}
BENCHMARK(BM_werner_full_float)->Arg(63)->Arg(1023)->Arg(4095);

static void BM_werner_full_exact(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const Rational f = rat("0.9");
    for (auto _ : state) {
        benchmark::DoNotOptimize(werner_delta_full(f, n));
    }
}
BENCHMARK(BM_werner_full_exact)->Arg(15)->Arg(63);

static void BM_oracle_dp(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto noise = NoiseModel::werner(rat("0.9"));
    const int d = 1 << ceil_log2(n + 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_shift_distribution_dp(noise, n, d));
    }
}
BENCHMARK(BM_oracle_dp)->Arg(15)->Arg(63)->Arg(255);

static void BM_monte_carlo(benchmark::State &state) {
    const auto spec = StrategySpec::werner_full(static_cast<int>(state.range(0)));
    const auto noise = NoiseModel::werner(rat("0.9"));
    const uint64_t trials = 100000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo(spec, noise, trials, 1, 1));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * trials));
}
BENCHMARK(BM_monte_carlo)->Arg(7)->Arg(63)->Unit(benchmark::kMillisecond);

static void BM_dense_eng(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const int d = 1 << ceil_log2(n + 1);
    auto start = ensemble_state(NoiseModel::werner(rat("0.8")), n).tensor(
        MixedState(make_qudit_bell(d, 0, 0, "AX", "BX")));
    auto pairs = ensemble_pairs(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_eng(start, pairs, {"AX", "BX"}));
    }
}
BENCHMARK(BM_dense_eng)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_ghz_dp(benchmark::State &state) {
    const auto noise = GhzDiagonalState::white_noise(3, rat("0.9"));
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ghz_failure_probability<double>(noise, n, GhzRounds::AmplitudeThenPhase));
    }
}
BENCHMARK(BM_ghz_dp)->Arg(7)->Arg(31);

BENCHMARK_MAIN();
