#include "cox2q/catalog.hpp"

#include "cox2q/errors.hpp"

#include <cmath>

namespace cox2q {

double family_stage1_rate(DistFamily family) {
    switch (family) {
        case DistFamily::I: return 1000.0;
        case DistFamily::II: return 10.0 / 9.0;
        case DistFamily::III: return 2.5;
    }
    throw UsageError("unknown distribution family");
}

std::string family_name(DistFamily family) {
    switch (family) {
        case DistFamily::I: return "I";
        case DistFamily::II: return "II";
        case DistFamily::III: return "III";
    }
    throw UsageError("unknown distribution family");
}

DistFamily parse_family(const std::string& text) {
    if (text == "I") return DistFamily::I;
    if (text == "II") return DistFamily::II;
    if (text == "III") return DistFamily::III;
    throw UsageError("unknown family '" + text + "' (expected I, II or III)");
}

Cox2Params dist_catalog(DistFamily family, double cv) {
    bool listed = false;
    for (double known : kCatalogCv) {
        if (cv == known) { listed = true; break; }
    }
    if (!listed) {
        throw UsageError("cv " + std::to_string(cv) +
                         " is not in the catalog (expected 2, 4, 6, 8 or 10)");
    }
    return fit_from_moments(1.0, cv, family_stage1_rate(family));
}

}  // namespace cox2q
