#pragma once

#include "cox2q/cox2.hpp"

#include <array>
#include <string>

namespace cox2q {

// The three study families share unit mean and a common cv grid but differ
// in stage-1 rate, hence in skewness and kurtosis at equal (m, cv).
enum class DistFamily { I, II, III };

inline constexpr std::array<double, 5> kCatalogCv = {2.0, 4.0, 6.0, 8.0, 10.0};

double family_stage1_rate(DistFamily family);

std::string family_name(DistFamily family);

// Parses "I", "II", "III"; anything else is a usage error.
DistFamily parse_family(const std::string& text);

// Unit-mean catalog entry; cv must be one of kCatalogCv.
Cox2Params dist_catalog(DistFamily family, double cv);

}  // namespace cox2q
