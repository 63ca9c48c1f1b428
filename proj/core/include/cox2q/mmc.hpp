#pragma once

#include "cox2q/errors.hpp"

namespace cox2q {

// Exact M/M/c results. min_tr is m/c by memorylessness.
struct MMcResult {
    double pi_wait = 0.0;
    double ew = 0.0;
    double eq = 0.0;
    double min_tr = 0.0;
};

// Erlang-C waiting probability for c servers at offered load a = lambda * m.
// Terms are accumulated with the recurrence t_{k+1} = t_k * a/(k+1) so no
// factorial is formed. Requires 0 < a < c.
double erlang_c(int c, double offered_load);

// Waiting probability, mean wait, mean number in system and minimum residual
// for the M/M/c queue with arrival rate lambda and mean service time m.
MMcResult mmc_measures(double lambda, double mean_service, int c);

}  // namespace cox2q
