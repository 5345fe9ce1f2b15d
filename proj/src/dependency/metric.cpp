#include "krpac/dependency/metric.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "krpac/errors.hpp"

namespace krpac::dependency {

namespace {

void check_diameter(double diameter) {
  if (!std::isfinite(diameter) || diameter <= 0.0) {
    throw ParameterError(fmt::format("metric diameter must be finite and positive, got {}", diameter));
  }
}

}  // namespace

Metric::Metric(MetricKind kind, std::vector<double> diameters)
    : kind_(kind), diameters_(std::move(diameters)) {}

Metric Metric::absolute(double diameter) {
  check_diameter(diameter);
  return Metric(MetricKind::absolute_difference, {diameter});
}

Metric Metric::discrete() { return Metric(MetricKind::discrete, {1.0}); }

Metric Metric::component_sum(std::vector<double> component_diameters) {
  if (component_diameters.empty()) {
    throw ParameterError("component-sum metric needs at least one component");
  }
  for (double d : component_diameters) check_diameter(d);
  return Metric(MetricKind::component_sum, std::move(component_diameters));
}

double Metric::diameter() const {
  return std::accumulate(diameters_.begin(), diameters_.end(), 0.0);
}

double Metric::distance(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != block_size() || b.size() != block_size()) {
    throw DimensionMismatch(fmt::format("metric expects blocks of size {}, got {} and {}",
                                        block_size(), a.size(), b.size()));
  }
  switch (kind_) {
    case MetricKind::discrete:
      return a[0] == b[0] ? 0.0 : 1.0;
    case MetricKind::absolute_difference:
    case MetricKind::component_sum: {
      double sum = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) sum += std::abs(a[k] - b[k]);
      return sum;
    }
  }
  return 0.0;
}

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::absolute_difference:
      return "absolute";
    case MetricKind::discrete:
      return "discrete";
    case MetricKind::component_sum:
      return "component_sum";
  }
  return "unknown";
}

}  // namespace krpac::dependency
