#include "krpac/config.hpp"

#include <fmt/format.h>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "krpac/errors.hpp"
#include "krpac/io.hpp"

namespace krpac {

namespace {

nlohmann::json to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, value] : *t) out[std::string(key.str())] = to_json(value);
    return out;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& value : *a) out.push_back(to_json(value));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  throw ConfigError("TOML dates and times are not supported in configs");
}

}  // namespace

nlohmann::json parse_toml(std::string_view text, std::string_view source) {
  try {
    return to_json(toml::parse(text, source));
  } catch (const toml::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
}

nlohmann::json load_config(const std::filesystem::path& path) {
  nlohmann::json j;
  if (path.extension() == ".toml") {
    std::string text;
    try {
      text = read_text_file(path);
    } catch (const IoError& e) {
      throw ConfigError(e.what());
    }
    j = parse_toml(text, path.string());
  } else {
    j = read_json_file(path);
  }
  if (!j.is_object()) throw ConfigError(fmt::format("{}: config must be a table/object", path.string()));
  if (!j.contains("schema_version")) throw ConfigError(fmt::format("{}: missing schema_version", path.string()));
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion) {
    throw ConfigError(fmt::format("{}: unsupported schema_version {} (expected {})", path.string(),
                                  j["schema_version"].dump(), kSchemaVersion));
  }
  return j;
}

std::string toml_library_version() {
  return fmt::format("{}.{}.{}", TOML_LIB_MAJOR, TOML_LIB_MINOR, TOML_LIB_PATCH);
}

}  // namespace krpac
