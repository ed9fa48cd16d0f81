#pragma once

// Scenario orchestration: realize a parsed config, dispatch to the requested
// solver, and export reports plus plot-ready CSV/grid files.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "goodwill/config.hpp"

namespace goodwill {

struct RunReport {
    ProblemTag problem = ProblemTag::simulate;
    std::vector<std::pair<std::string, double>> scalars;  // named headline values
    std::vector<std::string> files;                        // paths written
    std::vector<std::string> warnings;
    bool ok = true;          // false when a verify threshold was exceeded
    std::string report_text; // contents of report.txt
};

// Execute the scenario and write its outputs under config.output_dir
// (created if absent). All exports go through write-then-rename, so failures
// never leave half-written files. Module errors propagate to the caller.
RunReport run(const ScenarioConfig& config, std::uint64_t seed = 0);

}  // namespace goodwill
