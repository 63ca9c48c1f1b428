#include "cox2q/approx.hpp"

#include "cox2q/mmc.hpp"

#include <cmath>

namespace cox2q {

double min_residual_two_moment(double mean, double cv, int c) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw ParameterDomainError("mean service time must be positive and finite");
    }
    if (!(cv >= 0.0) || !std::isfinite(cv)) {
        throw ParameterDomainError("coefficient of variation must be nonnegative and finite");
    }
    if (c < 1) {
        throw ParameterDomainError("server count c must be at least 1");
    }
    return mean * (1.0 + cv * cv) / (2.0 * c);
}

double wait_decomposition(double pi_wait, double min_tr, double rho) {
    if (!(pi_wait >= 0.0) || !(pi_wait <= 1.0)) {
        throw ParameterDomainError("pi_wait must lie in [0, 1]");
    }
    if (!(min_tr >= 0.0) || !std::isfinite(min_tr)) {
        throw ParameterDomainError("min residual must be nonnegative and finite");
    }
    if (!(rho > 0.0) || !(rho < 1.0)) {
        throw ParameterDomainError("utilization rho must lie in (0, 1)");
    }
    return pi_wait * min_tr / (1.0 - rho);
}

ApproxBundle classic_bundle(const ModelSpec& model) {
    model.validate();
    const ServiceMoments mom = moments_from_params(model.service);

    ApproxBundle out;
    out.rho = model.utilization();
    out.min_tr = min_residual_two_moment(mom.m, mom.cv, model.c);
    out.pi_wait = erlang_c(model.c, model.lambda * mom.m);
    out.ew = wait_decomposition(out.pi_wait, out.min_tr, out.rho);
    out.eq = model.c * out.rho + model.lambda * out.ew;
    return out;
}

double relative_error(double approx, double exact) {
    if (exact == 0.0) {
        throw UndefinedConditionalError(
            "relative error is undefined against an exact value of zero");
    }
    return (approx - exact) / exact;
}

}  // namespace cox2q
