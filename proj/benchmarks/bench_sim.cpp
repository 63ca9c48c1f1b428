#include <benchmark/benchmark.h>

#include "cox2q/catalog.hpp"
#include "cox2q/sim.hpp"

using namespace cox2q;

// Event throughput of a single replication; items are arrivals.
static void BM_Replication(benchmark::State& state) {
    ModelSpec model;
    model.service = dist_catalog(DistFamily::I, 4.0);
    model.c = static_cast<int>(state.range(0));
    model.lambda = model.c * 0.5 / moments_from_params(model.service).m;

    const long arrivals = 100000;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const RawReplicationStats stats =
            run_replication(model, arrivals, 0, seed++);
        benchmark::DoNotOptimize(stats.sum_wait);
    }
    state.SetItemsProcessed(state.iterations() * arrivals);
}
BENCHMARK(BM_Replication)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

// Deep queues exercise the FIFO ring growth path.
static void BM_ReplicationHighLoad(benchmark::State& state) {
    ModelSpec model;
    model.service = dist_catalog(DistFamily::II, 4.0);
    model.c = 4;
    model.lambda = 4 * (state.range(0) / 100.0) /
                   moments_from_params(model.service).m;

    const long arrivals = 100000;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const RawReplicationStats stats =
            run_replication(model, arrivals, 0, seed++);
        benchmark::DoNotOptimize(stats.population_integral);
    }
    state.SetItemsProcessed(state.iterations() * arrivals);
}
BENCHMARK(BM_ReplicationHighLoad)->Arg(50)->Arg(90)->Arg(99);
