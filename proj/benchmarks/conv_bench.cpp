#include <benchmark/benchmark.h>

#include "convlab/methods.hpp"

using namespace convlab;

namespace {

// Layer shapes representative of early / middle / late network depths.
const struct LayerShape {
    const char* name;
    std::size_t c, h, w, m, k;
} kShapes[] = {
    {"early", 16, 56, 56, 64, 3},
    {"mid", 64, 28, 28, 128, 3},
    {"late", 128, 14, 14, 128, 3},
    {"pointwise", 192, 28, 28, 64, 1},
};

void BM_ConvMethod(benchmark::State& state) {
    const LayerShape& shape = kShapes[state.range(0)];
    const auto method = static_cast<ConvMethod>(state.range(1));
    ConvProblem problem(random_tensor3(shape.c, shape.h, shape.w, Layout::CHW, 1),
                        random_kernels(shape.m, shape.k, shape.c, KernelLayout::MKKC, 2));
    const GemmBackend backend = GemmBackend::blocked();
    for (auto _ : state) {
        Tensor3 out = run_method(method, problem, backend);
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetLabel(std::string(shape.name) + "/" + std::string(to_string(method)));
}

void register_all() {
    for (std::size_t shape = 0; shape < std::size(kShapes); ++shape) {
        for (const ConvMethod method : default_methods()) {
            benchmark::RegisterBenchmark("BM_ConvMethod", BM_ConvMethod)
                ->Args({static_cast<long>(shape), static_cast<long>(method)})
                ->Unit(benchmark::kMillisecond);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    register_all();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
