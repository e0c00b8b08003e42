#pragma once

#include "haarblocks/experiments.hpp"

#include <json.hpp>

#include <string>

// Serialization of schedules and experiment reports (JSON is canonical, CSV
// is a row projection for plotting tools) and the JSON-config experiment
// dispatcher used by the shared-library API and the CLI.
//
// Artifacts embed the full resolved configuration so any run can be repeated
// from its own output. Wall time and worker counts are reported on the
// console only: the serialized artifact is a pure function of (experiment,
// schedule, seed), which is what makes re-runs byte-identical.

namespace haarblocks {

inline constexpr int kSchemaVersion = 1;

/// Largest ambient dimension the sampling-based experiments accept; the
/// quadrature-based mdp-entry experiment has no such cap.
inline constexpr std::int64_t kMaxSamplingN = 100000;

nlohmann::json schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);

nlohmann::json rows_to_json(const ExperimentReport& report);

/// Full artifact: schema version, experiment name, resolved config, rows and
/// any extra fitted values.
nlohmann::json report_to_json(const ExperimentReport& report,
                              const nlohmann::json& resolved_config);

/// Header plus one line per row; identical values to the JSON rows.
std::string report_to_csv(const ExperimentReport& report);

/// Shortest round-trip decimal form of a double; NaN/inf become empty/inf.
std::string format_double(double v);

struct DispatchResult {
  ExperimentReport report;
  nlohmann::json resolved_config;  // config with all defaults filled in
};

/// Runs the experiment described by a config object:
///   { "experiment": "logmgf" | "ldp-decay" | "as-trace" | "mdp-entry" |
///                   "mdp-block" | "concentration",
///     "schedule": { "N_values": [...], "alpha": ..., "b": ...,
///                   "replicas": ..., "seed": {"value":..., "stream":...} },
///     ... experiment-specific parameters ... }
/// Throws DomainError for unknown experiments, invalid parameters, or a
/// sampling schedule exceeding kMaxSamplingN.
DispatchResult run_experiment_config(const nlohmann::json& config, unsigned threads);

}  // namespace haarblocks
