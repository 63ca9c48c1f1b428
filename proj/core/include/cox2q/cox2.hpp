#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "cox2q/errors.hpp"
#include "cox2q/random.hpp"

namespace cox2q {

// Two-stage Coxian service law: an exponential stage at rate mu1, followed
// with probability p_cont by a second exponential stage at rate mu2.
// p_cont is the continuation probability; the exit probability 1 - p_cont is
// what distribution tables usually print as "q1".
struct Cox2Params {
    double mu1 = 1.0;
    double mu2 = 0.0;
    double p_cont = 0.0;

    double q1_exit() const { return 1.0 - p_cont; }

    static Cox2Params exponential(double rate) { return {rate, 0.0, 0.0}; }

    // Throws ParameterDomainError when the invariants do not hold:
    // mu1 > 0, 0 <= p_cont <= 1, and mu2 > 0 whenever p_cont > 0.
    void validate() const;
};

// Service-time summary. `raw[k-1]` holds E[T^k] for k = 1..4; kurtosis is
// reported as excess kurtosis (0 for a normal law, 6 for an exponential).
struct ServiceMoments {
    double m = 0.0;
    double cv = 0.0;
    double skewness = 0.0;
    double ex_kurtosis = 0.0;
    std::array<double, 4> raw{};
};

// Closed-form moments of the Cox-2 law:
//   E[T^n] = n! * (1/mu1^n + p_cont * sum_{k=1..n} 1/(mu1^(n-k) mu2^k))
ServiceMoments moments_from_params(const Cox2Params& p);

// Solve for (mu2, p_cont) so that the Cox-2 with the given stage-1 rate has
// the requested mean and coefficient of variation. With b = m - 1/mu1 and
// D = m^2(1+cv^2) - 2/mu1^2 - 2b/mu1 the solution is mu2 = 2b/D,
// p_cont = b*mu2. b = 0 degenerates to the pure exponential (cv must be 1).
// Throws InfeasibleFitError naming the violated constraint otherwise.
Cox2Params fit_from_moments(double mean, double cv, double mu1);

// One service duration: stage 1, then stage 2 with probability p_cont.
// Uniform consumption order is fixed for reproducibility: stage-1 draw,
// routing draw (only when p_cont > 0), then the stage-2 draw when routed.
template <UniformSource S>
double sample_service(const Cox2Params& p, S& stream) {
    double t = sample_exponential(p.mu1, stream);
    if (p.p_cont > 0.0 && stream.next_unit() <= p.p_cont) {
        t += sample_exponential(p.mu2, stream);
    }
    return t;
}

// JSON service-law record {"mu1": f, "mu2": f, "q1_exit": f}, accepted
// everywhere a distribution is needed. Parsing validates the result.
std::string service_law_to_json(const Cox2Params& p);
Cox2Params service_law_from_json(const std::string& text);
Cox2Params service_law_from_file(const std::string& path);

}  // namespace cox2q
