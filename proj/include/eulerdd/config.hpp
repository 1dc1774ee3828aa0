#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eulerdd/analysis.hpp"

namespace eulerdd {

using Json = nlohmann::json;

inline constexpr double kDefaultDeltaT = 0.01;
inline constexpr std::size_t kMinQuadPoints = 8;
inline constexpr std::size_t kMinSlices = 16;

/// Run configuration; every field can also be set from the command line.
struct RunConfig {
  std::string scenario = "carr-purcell";
  std::optional<Json> inline_scenario;  // replaces the named scenario when set
  std::size_t qubits = 0;
  std::vector<double> delta_t{kDefaultDeltaT};
  std::size_t cycles = 10;
  std::size_t quad_points = kDefaultQuadPoints;
  std::size_t slices = kDefaultSlices;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double fault_scale = 1.0;
  std::string out;
  int verbosity = 1;
};

// Throws ConfigError on unknown keys or wrong types.
RunConfig parse_run_config(const Json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
// Throws ConfigError unless delta_t > 0, quad_points >= 8, slices >= 16, cycles >= 1, trials >= 1.
void validate_run_config(const RunConfig& config);

// Matrices: a Pauli string ("XZ") or a row-major list of rows whose entries are
// numbers or [re, im] pairs.
Matrix parse_matrix(const Json& j);
Json matrix_to_json(const Matrix& m);

// Builds the configured scenario at sub-interval length delta_t.
Scenario build_scenario(const RunConfig& config, double delta_t);
Scenario scenario_from_json(const Json& doc, const ScenarioOptions& options);

// Segment-by-segment description of an Eulerian schedule; doubles are written
// with round-trip precision.
Json export_schedule(const ControlSchedule& schedule);
ControlSchedule import_schedule(const Json& doc);

}  // namespace eulerdd
