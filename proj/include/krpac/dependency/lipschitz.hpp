#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krpac/dependency/metric.hpp"
#include "krpac/transport/reference.hpp"
#include "krpac/transport/triangular_map.hpp"

namespace krpac::dependency {

/// Degenerate pairs (rho below this) are skipped by every ratio estimator.
inline constexpr double kDegenerateDistance = 1e-9;

/// Pairs (v, z) for the transport-stability ratio of sites (i, j): both points
/// share `prefix` (the scalars of sites before i) and take site i from `levels`.
struct ProfileDesign {
  Point prefix;
  std::vector<Point> levels;
};

/// `levels` equispaced values per scalar of the site over `range`.
std::vector<Point> grid_levels(std::span<const Interval> range, std::size_t levels);

struct LipschitzProfile {
  /// ratio(a, b): estimated E_tau[rho(T(v_a, tau)_j, T(z_b, tau)_j)] / rho(v_a, z_b).
  /// NaN where the pair is degenerate.
  Eigen::MatrixXd ratio;
  Eigen::MatrixXd std_error;
  double estimate = 0.0;            ///< max over the grid; a lower estimate of L_ij
  double estimate_std_error = 0.0;  ///< Monte Carlo standard error at the argmax
  std::size_t argmax_first = 0;
  std::size_t argmax_second = 0;
};

/// Grid estimate of L_ij for the map (typically T composed with the restriction
/// to the good set). Prefixes are inverted with invert_prefix; the inner
/// expectation over tau ~ ref^{(i,d]} uses n_mc shared draws, so the estimate is
/// deterministic given seed and nondecreasing under grid refinement.
LipschitzProfile lipschitz_profile(const transport::TriangularMap& map,
                                   const transport::ReferenceMeasure& ref, std::size_t i,
                                   std::size_t j, const Metric& metric, const ProfileDesign& design,
                                   std::size_t n_mc, std::uint64_t seed);

/// CSV rows (v_i, z_i, ratio_estimate, std_error) over off-diagonal grid pairs.
/// Multi-scalar sites are written as ';'-joined values.
std::string profile_csv(const LipschitzProfile& profile, const ProfileDesign& design);

/// Strictly upper triangular matrix of grid estimates L_ij for all sites i < j,
/// each with its own design prefix midpoint and `levels` per scalar.
Eigen::MatrixXd estimate_dependency(const transport::TriangularMap& map,
                                    const transport::ReferenceMeasure& ref, const Metric& metric,
                                    std::span<const Interval> site_range, std::size_t levels,
                                    std::size_t n_mc, std::uint64_t seed);

}  // namespace krpac::dependency
