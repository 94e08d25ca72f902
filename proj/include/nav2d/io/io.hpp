#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nav2d/control/controller.hpp"
#include "nav2d/sim/simulator.hpp"

namespace nav2d::io {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr int kTraceSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

sim::Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const sim::Scenario& scenario);
sim::Scenario load_scenario(const std::string& path);

/// Apply a KEY=VALUE override (Table-style control parameters plus a few
/// scenario fields). Throws InvalidProblem for unknown keys or values that
/// violate the parameter invariants.
void apply_override(ctl::ControlParams* params, const std::string& key,
                    const std::string& value);

/// Newline-delimited trace records (one per integration step) with a header
/// line carrying the schema version.
void write_trace_jsonl(const std::vector<sim::TraceRecord>& trace, const std::string& path);

nlohmann::json metrics_to_json(const sim::Metrics& metrics);
void write_json_file(const nlohmann::json& j, const std::string& path);

/// Static vector plot: obstacles, workspace, traveled paths, RHRP snapshots
/// and tunnel boundaries.
void write_run_svg(const sim::Scenario& scenario, const std::vector<sim::RunResult>& runs,
                   const std::string& path);

}  // namespace nav2d::io
