#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "trustrpl/simulation.hpp"

namespace trustrpl::config {

/// JSON document mirroring ScenarioConfig; every field is written.
nlohmann::json to_json(const sim::ScenarioConfig& config);

/// Parses a scenario document. Absent fields keep their defaults; unknown keys
/// and mistyped values are rejected with the offending field path. The result
/// is validated.
sim::ScenarioConfig from_json(const nlohmann::json& doc);

/// Reads and parses a scenario file. Throws Error{Io} or Error{Config}.
sim::ScenarioConfig load_config(const std::filesystem::path& path);

/// 16 hex digits identifying every field except the seed.
std::string config_digest(const sim::ScenarioConfig& config);

}  // namespace trustrpl::config
