#include <benchmark/benchmark.h>

#include <random>

#include "tatecoh/descent.hpp"
#include "tatecoh/lseries.hpp"
#include "tatecoh/power_series.hpp"

using namespace tatecoh;

static void BM_Teichmuller(benchmark::State& state) {
    const long p = 37;
    const int N = static_cast<int>(state.range(0));
    long a = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(teichmuller(a, p, N));
        a = a % (p - 1) + 2;
    }
}
BENCHMARK(BM_Teichmuller)->Arg(6)->Arg(12)->Arg(24);

static void BM_UnitInverse(benchmark::State& state) {
    PadicInt x(37, static_cast<int>(state.range(0)), 123456789);
    for (auto _ : state) benchmark::DoNotOptimize(unit_inverse(x));
}
BENCHMARK(BM_UnitInverse)->Arg(8)->Arg(32);

static void BM_SeriesMultiply(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    PowerSeries f(5, 8, M), g(5, 8, M);
    for (int k = 0; k < M; ++k) {
        f.set(k, static_cast<long>(rng() % 390625));
        g.set(k, static_cast<long>(rng() % 390625));
    }
    for (auto _ : state) benchmark::DoNotOptimize(f * g);
}
BENCHMARK(BM_SeriesMultiply)->Arg(16)->Arg(64)->Arg(256);

static void BM_LevelSum(benchmark::State& state) {
    const long p = 5;
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            stickelberger_series(p, 2, level, 6, 8, Convention{-1, 1}, mpz_class(6)));
}
BENCHMARK(BM_LevelSum)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_KerCoker(benchmark::State& state) {
    const int r = static_cast<int>(state.range(0));
    FinitePModule M{5, std::vector<int>(r, 3), std::nullopt, std::nullopt};
    std::mt19937_64 rng(11);
    IntMat psi(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) psi.at(i, j) = static_cast<long>(rng() % 125);
    for (auto _ : state) benchmark::DoNotOptimize(endo_ker_coker(M, psi));
}
BENCHMARK(BM_KerCoker)->Arg(4)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
