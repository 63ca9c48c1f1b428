#include "cox2q/scenario.hpp"

#include <charconv>
#include <system_error>

namespace cox2q {

std::string format_number(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::string format_int(long long value) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_uint(std::uint64_t value) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ScenarioRow>& rows) {
    out << kCsvHeader << '\n';
    for (const ScenarioRow& r : rows) {
        out << r.scenario_id << ',' << r.family << ',';
        if (r.cv) out << format_number(*r.cv);
        out << ',';
        if (r.c) out << format_int(*r.c);
        out << ',';
        if (r.rho) out << format_number(*r.rho);
        out << ',';
        if (r.lambda) out << format_number(*r.lambda);
        out << ',' << r.method << ',' << r.metric << ',' << format_number(r.value)
            << ',';
        if (r.ci_half_width) out << format_number(*r.ci_half_width);
        out << ',';
        if (r.seed) out << format_uint(*r.seed);
        out << '\n';
    }
}

}  // namespace cox2q
