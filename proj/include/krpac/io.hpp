#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace krpac {

/// Writes the file in binary mode, creating parent directories. IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Whole file as a string. IoError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Parses a JSON file. ConfigError for a missing file or malformed JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace krpac
