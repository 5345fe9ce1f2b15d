#include "krpac/dependency/dependency_matrix.hpp"

#include <cmath>

#include <fmt/format.h>

#include "krpac/errors.hpp"

namespace krpac::dependency {

std::string to_string(ScaleMode mode) {
  return mode == ScaleMode::paper ? "paper" : "conservative";
}

ScaleMode parse_scale_mode(const std::string& name) {
  if (name == "paper") return ScaleMode::paper;
  if (name == "conservative") return ScaleMode::conservative;
  throw ConfigError(fmt::format("unknown scale mode '{}' (expected paper or conservative)", name));
}

Eigen::MatrixXd build_D(const Eigen::MatrixXd& lipschitz) {
  if (lipschitz.rows() != lipschitz.cols()) {
    throw ShapeError(fmt::format("L must be square, got {}x{}", lipschitz.rows(), lipschitz.cols()));
  }
  const Eigen::Index d = lipschitz.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      const double v = lipschitz(r, c);
      if (!std::isfinite(v) || v < 0.0) {
        throw ShapeError(fmt::format("L({},{}) = {} must be finite and nonnegative", r, c, v));
      }
      if (c <= r) {
        if (v != 0.0) throw ShapeError(fmt::format("L({},{}) = {} on or below the diagonal", r, c, v));
      } else {
        out(r, c) = v;
      }
    }
  }
  return out;
}

DependencyMatrix build_gamma(const Eigen::MatrixXd& d_matrix, double diameter,
                             std::size_t dimension, ScaleMode mode) {
  if (d_matrix.rows() != d_matrix.cols() || static_cast<std::size_t>(d_matrix.rows()) != dimension) {
    throw DimensionMismatch(fmt::format("D is {}x{}, dimension is {}", d_matrix.rows(), d_matrix.cols(), dimension));
  }
  if (dimension == 0) throw ParameterError("dimension must be positive");
  DependencyMatrix m;
  m.d_matrix = d_matrix;
  m.lipschitz = d_matrix.triangularView<Eigen::StrictlyUpper>();
  const double scale = mode == ScaleMode::paper ? diameter / static_cast<double>(dimension) : diameter;
  m.gamma = scale * d_matrix;
  m.mode = mode;
  m.diameter = diameter;
  m.dimension = dimension;
  return m;
}

DependencyMatrix build_gamma(const Eigen::MatrixXd& d_matrix, const Metric& metric,
                             std::size_t dimension, ScaleMode mode) {
  return build_gamma(d_matrix, metric.diameter(), dimension, mode);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("matrix rows must be arrays of equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

nlohmann::json to_json(const DependencyMatrix& m) {
  return {{"L", matrix_to_json(m.lipschitz)},
          {"D", matrix_to_json(m.d_matrix)},
          {"Gamma", matrix_to_json(m.gamma)},
          {"mode", to_string(m.mode)},
          {"diameter", m.diameter},
          {"d", m.dimension}};
}

}  // namespace krpac::dependency
