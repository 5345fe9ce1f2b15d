#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "krpac/transport/triangular_map.hpp"

namespace krpac::transport {

/// One component T_i(z_1, .., z_i) of a Bernstein triangular map on [0,1]^i.
///
/// The density in the last argument is sum_k beta_k(prefix) B_k^m(t), where each
/// coefficient function beta_k is a tensor-product Bernstein polynomial of the
/// prefix. The component is that density integrated from 0 to z_i and divided
/// by its total over [0, 1], so T_i(prefix, 1) = 1 for every prefix.
///
/// Coefficients are stored row-major over (prefix indices.., k) with k fastest.
/// For all multi-indices of the prefix, the sum over k must be positive.
class MonotoneComponent {
 public:
  /// degrees = {p_1, .., p_{i-1}, m}: prefix degrees followed by the degree of
  /// the density in the last argument.
  MonotoneComponent(std::vector<std::size_t> degrees, std::vector<double> coefficients);

  std::size_t arity() const { return degrees_.size(); }
  const std::vector<std::size_t>& degrees() const { return degrees_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  /// T_i at the point z (size == arity()).
  double evaluate(std::span<const double> z) const;

  /// Density coefficients beta_k(prefix) for the given prefix (size arity()-1).
  std::vector<double> density_coefficients(std::span<const double> prefix) const;

 private:
  std::vector<std::size_t> degrees_;
  std::vector<double> coefficients_;
};

/// Triangular map on [0,1]^d made of MonotoneComponents; component i has arity i+1.
class BernsteinMap final : public TriangularMap {
 public:
  explicit BernsteinMap(std::vector<MonotoneComponent> components);

  std::size_t dimension() const override { return components_.size(); }
  Interval domain(std::size_t) const override { return kUnitInterval; }
  void forward_prefix(std::span<const double> z, std::span<double> out) const override;
  double component(std::span<const double> prefix) const override;

  const std::vector<MonotoneComponent>& components() const { return components_; }

 private:
  std::vector<MonotoneComponent> components_;
};

/// Map with constant unit densities, i.e. the identity on [0,1]^d.
MapPtr bernstein_identity(std::size_t dimension, std::size_t degree = 0);

}  // namespace krpac::transport
