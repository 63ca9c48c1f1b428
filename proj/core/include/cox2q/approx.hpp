#pragma once

#include "cox2q/qbd.hpp"

namespace cox2q {

// Two-moment approximation of the conditional mean minimum residual service
// time at an arrival that finds all c servers busy: m (1 + cv^2) / (2c).
// Exact for c = 1 (M/G/1 residual) and for exponential service at any c.
double min_residual_two_moment(double mean, double cv, int c);

// Waiting-time decomposition E(W) = pi_wait * min_tr / (1 - rho).
// Exact when pi_wait and min_tr are themselves exact and service is
// exponential; an approximation otherwise.
double wait_decomposition(double pi_wait, double min_tr, double rho);

struct ApproxBundle {
    double rho = 0.0;
    double pi_wait = 0.0;  // Erlang-C waiting probability of the matched M/M/c
    double min_tr = 0.0;   // two-moment minimum-residual value
    double ew = 0.0;       // composed waiting-time approximation
    double eq = 0.0;       // c rho + lambda ew
};

// Classical pipeline: Erlang-C stands in for the waiting probability, the
// two-moment formula for the minimum residual, composed through the
// decomposition above.
ApproxBundle classic_bundle(const ModelSpec& model);

// Signed relative error (approx - exact) / exact.
double relative_error(double approx, double exact);

}  // namespace cox2q
