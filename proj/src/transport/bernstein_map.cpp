#include "krpac/transport/bernstein_map.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include <fmt/format.h>

#include "krpac/errors.hpp"
#include "krpac/transport/bernstein.hpp"

namespace krpac::transport {

MonotoneComponent::MonotoneComponent(std::vector<std::size_t> degrees,
                                     std::vector<double> coefficients)
    : degrees_(std::move(degrees)), coefficients_(std::move(coefficients)) {
  if (degrees_.empty()) throw ShapeError("monotone component needs at least one degree");
  std::size_t expected = 1;
  for (std::size_t p : degrees_) expected *= p + 1;
  if (coefficients_.size() != expected)
    throw ShapeError(fmt::format("monotone component: expected {} coefficients, got {}",
                                 expected, coefficients_.size()));
  for (double c : coefficients_)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw ParameterError("monotone component: coefficients must be finite and nonnegative");
  // Positive mass for every prefix multi-index keeps the normalizer positive
  // for every prefix, since the prefix basis is a nonnegative partition of unity.
  const std::size_t last = degrees_.back() + 1;
  for (std::size_t row = 0; row < coefficients_.size(); row += last) {
    double s = 0.0;
    for (std::size_t k = 0; k < last; ++k) s += coefficients_[row + k];
    if (!(s > 0.0))
      throw ParameterError("monotone component: every coefficient row needs a positive entry");
  }
}

std::vector<double> MonotoneComponent::density_coefficients(std::span<const double> prefix) const {
  const std::size_t last = degrees_.back() + 1;
  const std::size_t rows = coefficients_.size() / last;
  // Tensor-product prefix weights, built one coordinate at a time; the first
  // prefix coordinate varies slowest, matching the row-major layout.
  std::vector<double> weights{1.0};
  std::vector<double> b;
  for (std::size_t j = 0; j + 1 < degrees_.size(); ++j) {
    b.resize(degrees_[j] + 1);
    bernstein::basis(degrees_[j], std::clamp(prefix[j], 0.0, 1.0), b);
    std::vector<double> next;
    next.reserve(weights.size() * b.size());
    for (double w : weights)
      for (double v : b) next.push_back(w * v);
    weights = std::move(next);
  }
  std::vector<double> beta(last, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double w = weights[r];
    if (w == 0.0) continue;
    for (std::size_t k = 0; k < last; ++k) beta[k] += w * coefficients_[r * last + k];
  }
  return beta;
}

double MonotoneComponent::evaluate(std::span<const double> z) const {
  const auto beta = density_coefficients(z.first(z.size() - 1));
  return bernstein::normalized_integral(beta, z.back());
}

BernsteinMap::BernsteinMap(std::vector<MonotoneComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw ShapeError("Bernstein map needs at least one component");
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (components_[i].arity() != i + 1)
      throw ShapeError(fmt::format("component {} must take {} arguments, takes {}", i, i + 1,
                                   components_[i].arity()));
}

void BernsteinMap::forward_prefix(std::span<const double> z, std::span<double> out) const {
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = components_[i].evaluate(z.first(i + 1));
}

double BernsteinMap::component(std::span<const double> prefix) const {
  return components_[prefix.size() - 1].evaluate(prefix);
}

MapPtr bernstein_identity(std::size_t dimension, std::size_t degree) {
  std::vector<MonotoneComponent> components;
  for (std::size_t i = 0; i < dimension; ++i) {
    std::vector<std::size_t> degrees(i + 1, 0);
    degrees.back() = degree;
    std::size_t count = degree + 1;
    components.emplace_back(std::move(degrees), std::vector<double>(count, 1.0));
  }
  return std::make_shared<BernsteinMap>(std::move(components));
}

}  // namespace krpac::transport
