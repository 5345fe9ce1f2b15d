#include "krpac/transport/triangular_map.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "krpac/errors.hpp"

namespace krpac::transport {

double TriangularMap::component(std::span<const double> prefix) const {
  Point out(prefix.size());
  forward_prefix(prefix, out);
  return out.back();
}

void check_domain(const TriangularMap& map, std::span<const double> z) {
  if (z.size() > map.dimension())
    throw DimensionMismatch(
        fmt::format("point of size {} for a map of dimension {}", z.size(), map.dimension()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    const Interval dom = map.domain(i);
    if (!dom.contains(z[i]))
      throw DomainError(fmt::format("coordinate {} = {} outside domain [{}, {}]", i, z[i],
                                    dom.lower, dom.upper));
  }
}

Point forward(const TriangularMap& map, std::span<const double> z) {
  if (z.size() != map.dimension())
    throw DimensionMismatch(
        fmt::format("point of size {} for a map of dimension {}", z.size(), map.dimension()));
  check_domain(map, z);
  Point out(z.size());
  map.forward_prefix(z, out);
  return out;
}

namespace {

// Finite bracket [lo, hi] inside `dom` with f(lo) <= target <= f(hi), expanding
// geometrically over unbounded ends. Returns false if none exists.
template <typename F>
bool bracket(const F& f, Interval dom, double target, double tol, double& lo, double& hi) {
  constexpr double kLimit = 1e150;
  lo = std::isfinite(dom.lower) ? dom.lower : std::min(-1.0, dom.upper - 1.0);
  hi = std::isfinite(dom.upper) ? dom.upper : std::max(1.0, dom.lower + 1.0);
  while (f(lo) > target + tol) {
    if (std::isfinite(dom.lower) || std::abs(lo) > kLimit) return false;
    hi = lo;
    lo *= 2.0;
  }
  while (f(hi) < target - tol) {
    if (std::isfinite(dom.upper) || std::abs(hi) > kLimit) return false;
    lo = hi;
    hi *= 2.0;
  }
  return true;
}

}  // namespace

Point invert_prefix(const TriangularMap& map, std::span<const double> x_prefix, double tol,
                    std::size_t max_iterations) {
  if (x_prefix.size() > map.dimension())
    throw DimensionMismatch(fmt::format("prefix of size {} for a map of dimension {}",
                                        x_prefix.size(), map.dimension()));
  if (!(tol > 0.0)) throw ParameterError("invert_prefix: tolerance must be positive");

  Point z(x_prefix.size());
  for (std::size_t i = 0; i < x_prefix.size(); ++i) {
    const double target = x_prefix[i];
    const std::span<double> prefix(z.data(), i + 1);
    auto f = [&](double t) {
      prefix[i] = t;
      return map.component(prefix);
    };

    double lo = 0.0;
    double hi = 0.0;
    if (!std::isfinite(target) || !bracket(f, map.domain(i), target, tol, lo, hi))
      throw NoRootError(fmt::format("coordinate {}: value {} outside the range of the map", i,
                                    target));

    double f_lo = f(lo);
    double f_hi = f(hi);
    for (std::size_t it = 0; it < max_iterations; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (!(mid > lo && mid < hi)) break;
      const double f_mid = f(mid);
      if (f_mid < target) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
        f_hi = f_mid;
      }
    }
    const bool take_lo = std::abs(f_lo - target) <= std::abs(f_hi - target);
    const double best = take_lo ? lo : hi;
    const double residual = take_lo ? std::abs(f_lo - target) : std::abs(f_hi - target);
    if (residual > tol)
      throw NoRootError(fmt::format(
          "coordinate {}: no preimage of {} (closest value off by {})", i, target, residual));
    z[i] = best;
  }
  return z;
}

LinearTriangularMap::LinearTriangularMap(Eigen::MatrixXd matrix, Eigen::VectorXd offset,
                                         std::vector<Interval> domain)
    : matrix_(std::move(matrix)), offset_(std::move(offset)), domain_(std::move(domain)) {
  const auto d = matrix_.rows();
  if (d == 0 || matrix_.cols() != d) throw ShapeError("linear map: matrix must be square, d >= 1");
  if (offset_.size() != d) throw ShapeError("linear map: offset size differs from dimension");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(matrix_(i, i) > 0.0)) throw ParameterError("linear map: diagonal must be positive");
    for (Eigen::Index j = i + 1; j < d; ++j)
      if (matrix_(i, j) != 0.0) throw ShapeError("linear map: matrix must be lower triangular");
  }
  if (domain_.empty()) domain_.assign(static_cast<std::size_t>(d), kRealLine);
  if (domain_.size() != static_cast<std::size_t>(d))
    throw ShapeError("linear map: domain size differs from dimension");
}

void LinearTriangularMap::forward_prefix(std::span<const double> z, std::span<double> out) const {
  for (std::size_t i = 0; i < z.size(); ++i) {
    double s = offset_(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j <= i; ++j)
      s += matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
    out[i] = s;
  }
}

double LinearTriangularMap::component(std::span<const double> prefix) const {
  const auto i = static_cast<Eigen::Index>(prefix.size() - 1);
  double s = offset_(i);
  for (Eigen::Index j = 0; j <= i; ++j) s += matrix_(i, j) * prefix[static_cast<std::size_t>(j)];
  return s;
}

MapPtr identity_map(std::size_t dimension, Interval domain) {
  const auto d = static_cast<Eigen::Index>(dimension);
  return std::make_shared<LinearTriangularMap>(Eigen::MatrixXd::Identity(d, d),
                                               Eigen::VectorXd::Zero(d),
                                               std::vector<Interval>(dimension, domain));
}

ComposedMap::ComposedMap(MapPtr outer, MapPtr inner)
    : outer_(std::move(outer)), inner_(std::move(inner)) {
  if (!outer_ || !inner_) throw ParameterError("compose: null map");
  if (outer_->dimension() != inner_->dimension())
    throw DimensionMismatch(fmt::format("compose: outer dimension {} vs inner dimension {}",
                                        outer_->dimension(), inner_->dimension()));
}

void ComposedMap::forward_prefix(std::span<const double> z, std::span<double> out) const {
  Point mid(z.size());
  inner_->forward_prefix(z, mid);
  check_domain(*outer_, mid);
  outer_->forward_prefix(mid, out);
}

double ComposedMap::component(std::span<const double> prefix) const {
  Point mid(prefix.size());
  inner_->forward_prefix(prefix, mid);
  check_domain(*outer_, mid);
  return outer_->component(mid);
}

MapPtr compose(MapPtr outer, MapPtr inner) {
  return std::make_shared<ComposedMap>(std::move(outer), std::move(inner));
}

}  // namespace krpac::transport
