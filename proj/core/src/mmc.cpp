#include "cox2q/mmc.hpp"

#include <cmath>
#include <string>

namespace cox2q {

double erlang_c(int c, double offered_load) {
    const double a = offered_load;
    if (c < 1) {
        throw ParameterDomainError("server count must be at least 1");
    }
    if (!(a > 0.0)) {
        throw ParameterDomainError("offered load must be positive");
    }
    if (a >= c) {
        throw UnstableQueueError("offered load " + std::to_string(a) +
                                 " is at or above capacity c = " + std::to_string(c));
    }

    // term = a^k / k!, built incrementally.
    double term = 1.0;
    double sum = 0.0;
    for (int k = 0; k < c; ++k) {
        sum += term;
        term *= a / (k + 1);
    }
    // term now holds a^c / c!
    return term / ((1.0 - a / c) * sum + term);
}

MMcResult mmc_measures(double lambda, double mean_service, int c) {
    if (!(lambda > 0.0)) {
        throw ParameterDomainError("arrival rate must be positive");
    }
    if (!(mean_service > 0.0)) {
        throw ParameterDomainError("mean service time must be positive");
    }
    const double a = lambda * mean_service;
    const double rho = a / c;

    MMcResult r;
    r.pi_wait = erlang_c(c, a);
    r.ew = r.pi_wait * mean_service / (c * (1.0 - rho));
    r.eq = c * rho + lambda * r.ew;
    r.min_tr = mean_service / c;
    return r;
}

}  // namespace cox2q
