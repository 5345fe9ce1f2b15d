#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace krpac {

using Point = std::vector<double>;

/// Row-major: each sample is a contiguous span.
using SampleMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const double> row_span(const SampleMatrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline std::span<double> row_span(SampleMatrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

/// Closed interval; either end may be infinite.
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x >= lower && x <= upper; }
  bool bounded() const { return std::isfinite(lower) && std::isfinite(upper); }
  double length() const { return upper - lower; }
};

inline constexpr Interval kUnitInterval{0.0, 1.0};
inline constexpr Interval kRealLine{};

}  // namespace krpac
