#include "krpac/transport/map_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "krpac/errors.hpp"
#include "krpac/io.hpp"
#include "krpac/transport/bernstein_map.hpp"

namespace krpac::transport {

using nlohmann::json;

namespace {

double bound_from_json(const json& v, double fallback) {
  if (v.is_null()) return fallback;
  return v.get<double>();
}

json bound_to_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

MapPtr bernstein_from_json(const json& j, std::size_t dimension) {
  const auto& comps = j.at("components");
  if (!comps.is_array() || comps.size() != dimension)
    throw ConfigError("map file: need one component per dimension");
  std::vector<MonotoneComponent> components;
  for (const auto& c : comps)
    components.emplace_back(c.at("degrees").get<std::vector<std::size_t>>(),
                            c.at("coefficients").get<std::vector<double>>());
  return std::make_shared<BernsteinMap>(std::move(components));
}

MapPtr linear_from_json(const json& j, std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
  if (rows.size() != dimension) throw ConfigError("map file: matrix row count != dimension");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (row.size() != dimension) throw ConfigError("map file: matrix column count != dimension");
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = row[static_cast<std::size_t>(c)];
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  if (j.contains("offset")) {
    const auto off = j.at("offset").get<std::vector<double>>();
    if (off.size() != dimension) throw ConfigError("map file: offset size != dimension");
    for (Eigen::Index r = 0; r < d; ++r) b(r) = off[static_cast<std::size_t>(r)];
  }
  std::vector<Interval> domain;
  if (j.contains("domain")) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (const auto& side : j.at("domain"))
      domain.push_back({bound_from_json(side.at(0), -inf), bound_from_json(side.at(1), inf)});
  }
  return std::make_shared<LinearTriangularMap>(std::move(a), std::move(b), std::move(domain));
}

}  // namespace

MapPtr map_from_json(const json& j) {
  try {
    if (j.value("schema_version", 1) != 1)
      throw ConfigError("map file: unsupported schema_version");
    const auto type = j.at("type").get<std::string>();
    const auto dimension = j.at("dimension").get<std::size_t>();
    if (dimension == 0) throw ConfigError("map file: dimension must be positive");
    if (type == "bernstein") return bernstein_from_json(j, dimension);
    if (type == "linear") return linear_from_json(j, dimension);
    throw ConfigError("map file: unknown map type '" + type + "'");
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("map file: {}", e.what()));
  }
}

json map_to_json(const TriangularMap& map) {
  json j;
  j["schema_version"] = 1;
  j["dimension"] = map.dimension();
  if (const auto* b = dynamic_cast<const BernsteinMap*>(&map)) {
    j["type"] = "bernstein";
    json comps = json::array();
    for (const auto& c : b->components())
      comps.push_back({{"degrees", c.degrees()}, {"coefficients", c.coefficients()}});
    j["components"] = comps;
    return j;
  }
  if (const auto* l = dynamic_cast<const LinearTriangularMap*>(&map)) {
    j["type"] = "linear";
    json rows = json::array();
    json offset = json::array();
    json domain = json::array();
    for (Eigen::Index r = 0; r < l->matrix().rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < l->matrix().cols(); ++c) row.push_back(l->matrix()(r, c));
      rows.push_back(row);
      offset.push_back(l->offset()(r));
      const Interval dom = l->domain(static_cast<std::size_t>(r));
      domain.push_back({bound_to_json(dom.lower), bound_to_json(dom.upper)});
    }
    j["matrix"] = rows;
    j["offset"] = offset;
    j["domain"] = domain;
    return j;
  }
  throw ParameterError("map_to_json: only Bernstein and linear maps are serializable");
}

MapPtr load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open map file '{}'", path.string()));
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("map file '{}': {}", path.string(), e.what()));
  }
  return map_from_json(j);
}

void save_map(const TriangularMap& map, const std::filesystem::path& path) {
  write_text_file(path, map_to_json(map).dump(2) + "\n");
}

}  // namespace krpac::transport
