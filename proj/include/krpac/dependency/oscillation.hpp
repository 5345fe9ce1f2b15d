#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "krpac/dependency/metric.hpp"
#include "krpac/transport/good_set.hpp"
#include "krpac/types.hpp"

namespace krpac::dependency {

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Per-site local oscillations delta_1..delta_d; entries finite and nonnegative.
class OscillationVector {
 public:
  OscillationVector() = default;
  explicit OscillationVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  Eigen::VectorXd as_vector() const;

 private:
  std::vector<double> values_;
};

/// Two points that differ only in the scalars of one site.
struct PointPair {
  Point first;
  Point second;
};

/// All pairs of distinct grid points for `site`, other coordinates fixed at
/// `base`. Each scalar of the site gets `levels` equispaced values in `range`.
std::vector<PointPair> grid_pairs(std::span<const double> base, std::size_t site,
                                  const Metric& metric, std::span<const Interval> range,
                                  std::size_t levels);

/// `count` pairs with both points uniform in `box` and sharing all coordinates
/// outside `site`.
std::vector<PointPair> random_pairs(const transport::Box& box, std::size_t site,
                                    const Metric& metric, std::size_t count, std::uint64_t seed);

struct OscillationEstimate {
  double value = 0.0;
  std::size_t pairs_used = 0;
  /// A max over finitely many pairs only bounds the supremum from below.
  bool lower_bound = true;
};

/// max |f(z) - f(z')| / rho(z_site, z'_site) over the pairs; pairs with
/// rho < 1e-9 are skipped. DegenerateError if every pair is skipped.
OscillationEstimate local_oscillation(const ScalarFunction& f, std::size_t site,
                                      const Metric& metric, std::span<const PointPair> pairs);

/// Convenience design: a `levels`-point grid through the centre of `box`
/// plus `pair_count` random pairs.
struct OscillationDesign {
  transport::Box box;
  std::size_t levels = 0;
  std::size_t pair_count = 1000;
  std::uint64_t seed = 0;
};

OscillationEstimate local_oscillation(const ScalarFunction& f, std::size_t site,
                                      const Metric& metric, const OscillationDesign& design);

}  // namespace krpac::dependency
