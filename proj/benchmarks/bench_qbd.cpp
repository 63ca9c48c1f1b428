#include <benchmark/benchmark.h>

#include "cox2q/catalog.hpp"
#include "cox2q/qbd.hpp"

using namespace cox2q;

namespace {

ModelSpec heavy_tail_model(int c, double rho) {
    ModelSpec model;
    model.service = dist_catalog(DistFamily::III, 4.0);
    model.c = c;
    model.lambda = c * rho / moments_from_params(model.service).m;
    return model;
}

}  // namespace

// Full pipeline: R iteration, boundary solve, measures. The phase dimension
// grows with the server count, which dominates the cost.
static void BM_ExactMeasures(benchmark::State& state) {
    const ModelSpec model = heavy_tail_model(static_cast<int>(state.range(0)), 0.5);
    for (auto _ : state) {
        const PerfMeasures m = measures(model, stationary(model));
        benchmark::DoNotOptimize(m.ew);
    }
}
BENCHMARK(BM_ExactMeasures)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

// High load slows the R fixed point (spectral radius near 1) and deepens the
// truncation level of the reference solver.
static void BM_ExactMeasuresByLoad(benchmark::State& state) {
    const ModelSpec model = heavy_tail_model(4, state.range(0) / 100.0);
    for (auto _ : state) {
        const PerfMeasures m = measures(model, stationary(model));
        benchmark::DoNotOptimize(m.ew);
    }
}
BENCHMARK(BM_ExactMeasuresByLoad)->Arg(30)->Arg(60)->Arg(90);

static void BM_TruncatedReference(benchmark::State& state) {
    const ModelSpec model = heavy_tail_model(4, state.range(0) / 100.0);
    for (auto _ : state) {
        const PerfMeasures m = truncated_oracle(model);
        benchmark::DoNotOptimize(m.ew);
    }
}
BENCHMARK(BM_TruncatedReference)->Arg(30)->Arg(60)->Arg(90);
