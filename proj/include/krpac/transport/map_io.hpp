#pragma once

#include <filesystem>

#include <json.hpp>

#include "krpac/transport/triangular_map.hpp"

namespace krpac::transport {

// Map definition file (JSON):
//
//   { "schema_version": 1, "type": "bernstein", "dimension": d,
//     "components": [ { "degrees": [p_1, .., p_{i-1}, m],
//                       "coefficients": [ ... row-major, last index fastest ] }, .. ] }
//
//   { "schema_version": 1, "type": "linear", "dimension": d,
//     "matrix": [[..], ..], "offset": [..],
//     "domain": [[lo, hi], ..] }            // optional, null = unbounded end

MapPtr map_from_json(const nlohmann::json& j);
nlohmann::json map_to_json(const TriangularMap& map);

MapPtr load_map(const std::filesystem::path& path);
void save_map(const TriangularMap& map, const std::filesystem::path& path);

}  // namespace krpac::transport
