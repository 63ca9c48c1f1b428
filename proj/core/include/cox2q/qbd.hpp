#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cox2q/cox2.hpp"
#include "cox2q/errors.hpp"

namespace cox2q {

// Full queue description: Poisson arrivals at rate lambda into c identical
// servers with Cox-2 service.
struct ModelSpec {
    double lambda = 1.0;
    int c = 1;
    Cox2Params service;

    // lambda * m / c. Throws if parameters are invalid or the queue is
    // unstable (rho >= 1).
    double utilization() const;
    void validate() const;
};

// Level-structured generator of the (n, j) chain, where n is the number of
// customers in the system and j counts busy servers currently in stage 2.
//
// Repeating blocks (levels >= c+1, all (c+1) x (c+1)):
//   a0 = lambda * I                        arrivals
//   a1 = local rates + stage-1 continuations (upper bidiagonal)
//   a2 = departures; on exit or stage-2 completion the freed server takes the
//        head-of-line customer into stage 1, so a2 is diagonal + subdiagonal.
// Boundary blocks for levels n < c have growing phase counts (level n holds
// phases j = 0..n):
//   b0[n] : level n -> n+1, (n+1) x (n+2), for n = 0..c-1
//   b1[n] : local at level n, (n+1) x (n+1), for n = 0..c-1
//   b2[n] : level n -> n-1, (n+1) x n, for n = 1..c (b2[0] unused)
// The local block at level c is a1 itself.
struct GeneratorBlocks {
    int c = 1;
    Eigen::MatrixXd a0, a1, a2;
    std::vector<Eigen::MatrixXd> b0;
    std::vector<Eigen::MatrixXd> b1;
    std::vector<Eigen::MatrixXd> b2;
};

GeneratorBlocks build_generator(const ModelSpec& model);

// Largest absolute row sum over all generator rows at levels 0..c+1,
// relative to the total event rate. Zero for a conservative generator.
double max_row_sum_deviation(const GeneratorBlocks& blocks);

// Minimal nonnegative solution of a0 + R a1 + R^2 a2 = 0 via the fixed point
// R <- -(a0 + R^2 a2) a1^{-1} from R = 0. Converged when the block-equation
// residual drops below tol * lambda.
Eigen::MatrixXd solve_r(const GeneratorBlocks& blocks, double tol = 1e-12,
                        long max_iter = 1000000);

// Boundary vectors pi_0..pi_c plus the rate matrix of the geometric tail
// pi_{n+1} = pi_n R for n >= c.
struct StationarySolution {
    std::vector<Eigen::RowVectorXd> boundary;
    Eigen::MatrixXd r;
};

StationarySolution stationary(const ModelSpec& model);

// Largest absolute global-balance residual of the stationary solution over
// levels 0..c+1 (tail levels are exact by construction of R).
double max_balance_residual(const ModelSpec& model, const StationarySolution& sol);

double spectral_radius(const Eigen::MatrixXd& r);

// Stationary mean performance measures.
struct PerfMeasures {
    double rho = 0.0;
    double pi_wait = 0.0;   // P(arriving customer finds all servers busy)
    double eq = 0.0;        // mean number in system
    double eqw = 0.0;       // mean number waiting
    double ew = 0.0;        // mean wait before service
    double min_tr = 0.0;    // conditional mean minimum residual service time
};

PerfMeasures measures(const ModelSpec& model, const StationarySolution& sol);

// T[j] = expected time until the first service completion when all c servers
// are busy and j of them are in stage 2. With r_j = (c-j) mu1 + j mu2:
//   T_c = 1/(c mu2),  T_j = 1/r_j + ((c-j) mu1 p_cont / r_j) T_{j+1}.
std::vector<double> departure_times(const ModelSpec& model);

// Exact conditional expectation of the minimum residual service time seen by
// an arrival that finds all servers busy: the departure-time vector averaged
// over the stationary all-busy phase distribution pi_c (I-R)^{-1}.
double min_residual_exact(const ModelSpec& model, const StationarySolution& sol);

// Independent brute-force reference: truncates the chain at a level chosen so
// the tail mass is below tail_mass_tol, solves the finite system by block
// elimination, and evaluates the same measures. Hard cap of 10^6 states.
PerfMeasures truncated_oracle(const ModelSpec& model, double tail_mass_tol = 1e-12);

}  // namespace cox2q
