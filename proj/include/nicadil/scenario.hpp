#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "nicadil/semicrossed.hpp"

namespace nicadil {

// Scenario-file driven front end. A scenario declares the lattice factors,
// one representation or covariant pair, and a list of tasks; running it
// yields a machine-readable JSON report with one record per task and exit
// code 0 (all verdicts pass), 1 (some verdict failed), 2 (schema error) or
// 3 (computation error).

using Json = nlohmann::ordered_json;

struct RunFlags {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> depth;
    bool parallel = false;
};

struct ScenarioResult {
    Json report;
    int exit_code = 0;
};

ScenarioResult run_scenario_json(const Json& scenario, const RunFlags& flags = {});
ScenarioResult run_scenario_file(const std::string& path, const RunFlags& flags = {});

// Canonical schema texts (also versioned under schemas/ in the repository).
std::string scenario_schema_text();
std::string report_schema_text();

// Serializes a report with the wall-time fields replaced by a constant, for
// byte-comparison across runs.
std::string report_to_string(const Json& report, bool mask_timing = false);

} // namespace nicadil
