#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "repute/scenario.hpp"

namespace repute {

/// Parses scenario text (grammar in docs/config-format.md) and validates
/// it. Throws ConfigError listing every parse, reference and invariant
/// problem, each prefixed with "source:line".
ScenarioConfig parse_config(std::string_view text, const std::string& source = "<config>");

/// Reads and parses a scenario file. Missing or unreadable files are
/// reported as a ConfigError too.
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace repute
