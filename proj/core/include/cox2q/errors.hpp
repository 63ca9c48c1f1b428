#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cox2q {

// Base for all library errors. `code()` is a stable machine-readable slug
// that the CLI prints alongside the message.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

  private:
    std::string code_;
};

// Invalid distribution or model parameters (mu1 <= 0, p_cont outside [0,1], ...).
class ParameterDomainError : public Error {
  public:
    explicit ParameterDomainError(const std::string& message)
        : Error("parameter_domain", message) {}
};

// Two-moment fit has no Cox-2 solution for the requested (m, cv, mu1).
class InfeasibleFitError : public Error {
  public:
    explicit InfeasibleFitError(const std::string& message)
        : Error("infeasible_fit", message) {}
};

// Offered load at or above capacity: no stationary regime.
class UnstableQueueError : public Error {
  public:
    explicit UnstableQueueError(const std::string& message)
        : Error("unstable_queue", message) {}
};

// Numerical solver failed (non-convergence, singular boundary system).
class SolverError : public Error {
  public:
    explicit SolverError(const std::string& message)
        : Error("solver_failure", message) {}
};

// Conditional quantity requested on an event of probability zero.
class UndefinedConditionalError : public Error {
  public:
    explicit UndefinedConditionalError(const std::string& message)
        : Error("undefined_conditional", message) {}
};

// Brute-force oracle would need more states than the hard cap allows.
class OracleInfeasibleError : public Error {
  public:
    explicit OracleInfeasibleError(const std::string& message)
        : Error("oracle_infeasible", message) {}
};

// Independent replications could not produce a usable estimate.
class EstimationError : public Error {
  public:
    explicit EstimationError(const std::string& message)
        : Error("estimation_failure", message) {}
};

// Bad command-line usage or malformed input files. CLI maps this to exit 2.
class UsageError : public Error {
  public:
    explicit UsageError(const std::string& message)
        : Error("usage", message) {}
};

}  // namespace cox2q
