#pragma once

#include <string>

#include "scenario.hpp"

namespace crs::cli {

/// CSV with `#` provenance comments, a header row and one row per
/// (family, sweep value). Numbers use 17 significant digits; lines end in LF.
std::string cmd_rate(const Scenario& s);
std::string cmd_outage(const Scenario& s);
std::string cmd_optimize(const Scenario& s);

struct ValidateReport {
    std::string json;
    bool passed = true;
};

/// Runs the invariant groups and returns a JSON report. A group whose
/// contour evaluation fails to converge only because the tolerance was
/// tightened below the default is reported as a warning.
ValidateReport cmd_validate(const Scenario& s);

std::string format_number(double v);

}  // namespace crs::cli
