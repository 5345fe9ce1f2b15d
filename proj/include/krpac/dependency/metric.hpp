#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace krpac::dependency {

enum class MetricKind { absolute_difference, discrete, component_sum };

/// Base metric rho on the single-site space Z. A site may span several scalar
/// coordinates (Z = X x Y); block_size() says how many.
class Metric {
 public:
  /// |a - b| on an interval of the given length.
  static Metric absolute(double diameter = 1.0);
  /// 1{a != b}.
  static Metric discrete();
  /// sum_k |a_k - b_k| on a product of intervals with the given lengths.
  static Metric component_sum(std::vector<double> component_diameters);

  MetricKind kind() const { return kind_; }
  std::size_t block_size() const { return diameters_.size(); }
  /// ||rho|| = sup rho; finite by construction.
  double diameter() const;
  double distance(std::span<const double> a, std::span<const double> b) const;

 private:
  Metric(MetricKind kind, std::vector<double> diameters);

  MetricKind kind_;
  std::vector<double> diameters_;
};

std::string to_string(MetricKind kind);

}  // namespace krpac::dependency
