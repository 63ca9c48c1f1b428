#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cox2q {

// One plot-ready data point. Optional fields print as empty CSV cells.
struct ScenarioRow {
    std::string scenario_id;
    std::string family;  // I, II, III or custom
    std::optional<double> cv;
    std::optional<int> c;
    std::optional<double> rho;
    std::optional<double> lambda;
    std::string method;  // exact, sim, approx_eq2, erlang_c, classic
    std::string metric;  // pi_wait, ew, eq, min_tr, rel_err (tables add fit columns)
    double value = 0.0;
    std::optional<double> ci_half_width;
    std::optional<std::uint64_t> seed;
};

inline constexpr const char* kCsvHeader =
    "scenario_id,family,cv,c,rho,lambda,method,metric,value,ci_half_width,seed";

// Shortest round-trip decimal form, locale-independent.
std::string format_number(double value);

void write_csv(std::ostream& out, const std::vector<ScenarioRow>& rows);

}  // namespace cox2q
