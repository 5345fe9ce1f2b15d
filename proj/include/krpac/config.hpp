#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace krpac {

/// Supported config schema version.
inline constexpr int kSchemaVersion = 1;

/// Reads a TOML (.toml) or JSON (anything else) config into a JSON value.
/// ConfigError for a missing file, a parse error, or a schema_version other
/// than kSchemaVersion.
nlohmann::json load_config(const std::filesystem::path& path);

/// Parses TOML text into the equivalent JSON value.
nlohmann::json parse_toml(std::string_view text, std::string_view source = "config");

/// Version of the bundled TOML parser.
std::string toml_library_version();

}  // namespace krpac
