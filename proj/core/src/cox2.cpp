#include "cox2q/cox2.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cox2q {

void Cox2Params::validate() const {
    if (!(mu1 > 0.0) || !std::isfinite(mu1)) {
        throw ParameterDomainError("stage-1 rate mu1 must be positive and finite");
    }
    if (!(p_cont >= 0.0 && p_cont <= 1.0)) {
        throw ParameterDomainError("continuation probability p_cont must lie in [0,1]");
    }
    if (p_cont > 0.0 && (!(mu2 > 0.0) || !std::isfinite(mu2))) {
        throw ParameterDomainError("stage-2 rate mu2 must be positive when p_cont > 0");
    }
}

ServiceMoments moments_from_params(const Cox2Params& p) {
    p.validate();

    ServiceMoments out;
    double factorial = 1.0;
    for (int n = 1; n <= 4; ++n) {
        factorial *= n;
        double sum = 0.0;
        if (p.p_cont > 0.0) {
            // sum_{k=1..n} mu1^(k-n) mu2^(-k)
            for (int k = 1; k <= n; ++k) {
                sum += 1.0 / (std::pow(p.mu1, n - k) * std::pow(p.mu2, k));
            }
        }
        out.raw[n - 1] = factorial * (1.0 / std::pow(p.mu1, n) + p.p_cont * sum);
    }

    const double m = out.raw[0];
    const double var = out.raw[1] - m * m;
    const double sigma = std::sqrt(var);
    const double mu3 = out.raw[2] - 3.0 * m * out.raw[1] + 2.0 * m * m * m;
    const double mu4 = out.raw[3] - 4.0 * m * out.raw[2] + 6.0 * m * m * out.raw[1] -
                       3.0 * m * m * m * m;

    out.m = m;
    out.cv = sigma / m;
    out.skewness = mu3 / (sigma * sigma * sigma);
    out.ex_kurtosis = mu4 / (var * var) - 3.0;
    return out;
}

Cox2Params fit_from_moments(double mean, double cv, double mu1) {
    if (!(mean > 0.0)) throw InfeasibleFitError("target mean must be positive");
    if (!(cv > 0.0)) throw InfeasibleFitError("target cv must be positive");
    if (!(mu1 > 0.0)) throw InfeasibleFitError("stage-1 rate mu1 must be positive");

    const double b = mean - 1.0 / mu1;
    if (b < 0.0) {
        throw InfeasibleFitError(
            "stage-1 mean exceeds the target mean (mu1 < 1/m, so b < 0)");
    }
    if (b == 0.0) {
        // Stage 1 carries the whole mean; only the exponential remains.
        if (std::abs(cv - 1.0) > 1e-12) {
            throw InfeasibleFitError(
                "mu1 = 1/m leaves no mass for stage 2; only cv = 1 is reachable");
        }
        return Cox2Params::exponential(mu1);
    }

    const double second_moment = mean * mean * (1.0 + cv * cv);
    const double d = second_moment - 2.0 / (mu1 * mu1) - 2.0 * b / mu1;
    if (d <= 0.0) {
        throw InfeasibleFitError(
            "second-moment target unreachable for this mu1 (D <= 0)");
    }

    const double mu2 = 2.0 * b / d;
    const double p_cont = b * mu2;
    if (p_cont > 1.0) {
        throw InfeasibleFitError(
            "fit requires continuation probability above 1 (p_cont > 1)");
    }

    Cox2Params out{mu1, mu2, p_cont};
    out.validate();
    return out;
}

std::string service_law_to_json(const Cox2Params& p) {
    nlohmann::json j;
    j["mu1"] = p.mu1;
    j["mu2"] = p.mu2;
    j["q1_exit"] = p.q1_exit();
    return j.dump();
}

Cox2Params service_law_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed service-law JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("mu1") || !j.contains("mu2") ||
        !j.contains("q1_exit")) {
        throw UsageError(
            "service-law record must be an object with mu1, mu2 and q1_exit");
    }
    Cox2Params p;
    try {
        p.mu1 = j.at("mu1").get<double>();
        p.mu2 = j.at("mu2").get<double>();
        const double q1 = j.at("q1_exit").get<double>();
        p.p_cont = 1.0 - q1;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed service-law JSON: ") + e.what());
    }
    p.validate();
    return p;
}

Cox2Params service_law_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open service-law file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return service_law_from_json(buf.str());
}

}  // namespace cox2q
