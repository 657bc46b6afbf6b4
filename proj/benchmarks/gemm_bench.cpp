#include <benchmark/benchmark.h>

#include "convlab/gemm.hpp"

using namespace convlab;

namespace {

void BM_GemmReference(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Matrix a = random_matrix(n, n, 1);
    Matrix b = random_matrix(n, n, 2);
    for (auto _ : state) {
        Matrix c = gemm_reference(a, b);
        benchmark::DoNotOptimize(c.data().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n * n);
}

void BM_GemmBlocked(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Matrix a = random_matrix(n, n, 1);
    Matrix b = random_matrix(n, n, 2);
    const GemmBackend backend = GemmBackend::blocked();
    for (auto _ : state) {
        Matrix c = gemm_blocked(a, b, backend);
        benchmark::DoNotOptimize(c.data().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n * n);
}

void BM_GemmParallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto threads = static_cast<std::size_t>(state.range(1));
    Matrix a = random_matrix(n, n, 1);
    Matrix b = random_matrix(n, n, 2);
    const GemmBackend backend = GemmBackend::parallel(threads);
    for (auto _ : state) {
        Matrix c = gemm_parallel(a, b, backend);
        benchmark::DoNotOptimize(c.data().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n * n);
}

}  // namespace

BENCHMARK(BM_GemmReference)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_GemmBlocked)->Arg(64)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_GemmParallel)
    ->Args({256, 1})
    ->Args({256, 2})
    ->Args({256, 4})
    ->Args({512, 4});

BENCHMARK_MAIN();
