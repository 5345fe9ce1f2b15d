#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "krpac/dependency/metric.hpp"

namespace krpac::dependency {

/// paper: Gamma = (||rho|| / d) D.  conservative: Gamma = ||rho|| D.
enum class ScaleMode { paper, conservative };

std::string to_string(ScaleMode mode);
ScaleMode parse_scale_mode(const std::string& name);

/// Wasserstein dependency matrix Gamma with the L and D it was built from.
struct DependencyMatrix {
  Eigen::MatrixXd lipschitz;  ///< L, strictly upper triangular
  Eigen::MatrixXd d_matrix;   ///< D: unit diagonal, L above, zero below
  Eigen::MatrixXd gamma;
  ScaleMode mode = ScaleMode::paper;
  double diameter = 0.0;
  std::size_t dimension = 0;
};

/// D from L. ShapeError unless L is square, nonnegative and strictly upper
/// triangular.
Eigen::MatrixXd build_D(const Eigen::MatrixXd& lipschitz);

DependencyMatrix build_gamma(const Eigen::MatrixXd& d_matrix, const Metric& metric,
                             std::size_t dimension, ScaleMode mode);
DependencyMatrix build_gamma(const Eigen::MatrixXd& d_matrix, double diameter,
                             std::size_t dimension, ScaleMode mode);

/// {"L", "D", "Gamma", "mode", "diameter", "d"}
nlohmann::json to_json(const DependencyMatrix& m);
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

}  // namespace krpac::dependency
