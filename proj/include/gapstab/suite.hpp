#pragma once

#include "gapstab/config.hpp"
#include "gapstab/report.hpp"

namespace gapstab {

// Suites in dependency order.
const std::vector<std::string>& suite_names();

// "all" expands to every suite; unknown names are a config error.
std::vector<std::string> resolve_suites(const std::vector<std::string>& requested);

// Builds the lattice, hopping model and interaction once so that geometry and
// range errors surface before any check runs.
void validate_config(const RunConfig& config);

VerificationReport run_suite(const RunConfig& config, const std::vector<std::string>& suites,
                             const std::string& command = "suite");

}  // namespace gapstab
