// Compares the OpenMP discrepancy kernel against the serial reference and
// times the two exact searches at their acceptance-scale inputs.

#include "edp/search.hpp"
#include "edp/seqcore.hpp"

#include <benchmark/benchmark.h>

using namespace edp;

static void BM_DiscrepancySerial(benchmark::State& state) {
    Sequence x = walters(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(discrepancy_serial(x).value);
}
BENCHMARK(BM_DiscrepancySerial)->Arg(10'000)->Arg(100'000)->Arg(1'000'000);

static void BM_DiscrepancyParallel(benchmark::State& state) {
    Sequence x = walters(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(discrepancy(x).value);
}
BENCHMARK(BM_DiscrepancyParallel)->Arg(10'000)->Arg(100'000)->Arg(1'000'000);

static void BM_SearchEdp1(benchmark::State& state) {
    SearchBudget b;
    b.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(search_edp1(12, 1, b).status);
}
BENCHMARK(BM_SearchEdp1)->Arg(1)->Arg(4);

static void BM_SearchEdp2(benchmark::State& state) {
    SearchBudget b;
    b.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(search_edp2(247, 2, b).status);
}
BENCHMARK(BM_SearchEdp2)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
