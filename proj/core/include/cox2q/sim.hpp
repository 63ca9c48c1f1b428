#pragma once

#include "cox2q/qbd.hpp"

#include <cstdint>
#include <vector>

namespace cox2q {

struct SimConfig {
    long replications = 30;
    long arrivals_per_rep = 200000;  // post-warmup, per replication
    long warmup_arrivals = 20000;
    std::uint64_t master_seed = 1;

    void validate() const;
};

// Raw sums from one replication. The measurement window runs from the epoch
// of the last warmup arrival (time 0 when warmup is 0) to the epoch of the
// last tracked arrival; the population integral covers exactly that window.
struct RawReplicationStats {
    long arrivals = 0;             // tracked arrivals
    long waited = 0;               // tracked arrivals that found all servers busy
    double sum_wait = 0.0;         // waiting time before service, zeros included
    double sum_min_residual = 0.0; // sum over waited arrivals of time to next completion
    double sum_service = 0.0;      // service durations of tracked arrivals
    double population_integral = 0.0;
    double window_length = 0.0;
};

struct MetricEstimate {
    double point = 0.0;
    double half_width = 0.0;  // 95% two-sided Student-t on replication means
    long replications = 0;    // replications that contributed
};

struct SimEstimates {
    MetricEstimate pi_wait;
    MetricEstimate ew;
    MetricEstimate eq;
    MetricEstimate min_tr;
    std::vector<std::uint64_t> seeds;  // per-replication stream seeds, in index order
};

RawReplicationStats run_replication(const ModelSpec& model, long horizon_arrivals,
                                    long warmup_arrivals, std::uint64_t seed);

// Runs config.replications independent replications, streams derived from
// (master_seed, index). Aggregation is by replication index, so the result
// does not depend on scheduling. max_threads = 0 picks the hardware count.
SimEstimates estimate(const ModelSpec& model, const SimConfig& config,
                      int max_threads = 0);

}  // namespace cox2q
