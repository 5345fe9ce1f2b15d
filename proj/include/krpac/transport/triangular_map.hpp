#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "krpac/types.hpp"

namespace krpac::transport {

/// Monotone triangular (Knothe-Rosenblatt) map Z^d -> Z^d.
///
/// Output coordinate i depends only on the input prefix z[0..i] and is
/// strictly increasing in z[i]. Implementations are immutable and may be
/// shared across threads.
class TriangularMap {
 public:
  virtual ~TriangularMap() = default;

  virtual std::size_t dimension() const = 0;

  /// Admissible inputs of coordinate i.
  virtual Interval domain(std::size_t i) const = 0;

  /// Writes the first z.size() outputs. z.size() == out.size() <= dimension().
  /// Inputs are not range-checked here; see forward().
  virtual void forward_prefix(std::span<const double> z, std::span<double> out) const = 0;

  /// Output coordinate prefix.size() - 1 as a function of the prefix.
  virtual double component(std::span<const double> prefix) const;
};

using MapPtr = std::shared_ptr<const TriangularMap>;

/// Default residual tolerance and iteration cap of the prefix inversion.
inline constexpr double kInversionTolerance = 1e-10;
inline constexpr std::size_t kInversionMaxIterations = 200;

/// Throws DomainError unless every z[i] lies in map.domain(i).
void check_domain(const TriangularMap& map, std::span<const double> z);

/// Full evaluation with domain check.
Point forward(const TriangularMap& map, std::span<const double> z);

/// Solves T^{[i]}(z) = x_prefix coordinate by coordinate with bisection.
/// The result satisfies |T(z)_k - x_k| <= tol for every k; NoRootError when
/// some x_k lies outside the range of its component.
Point invert_prefix(const TriangularMap& map, std::span<const double> x_prefix,
                    double tol = kInversionTolerance,
                    std::size_t max_iterations = kInversionMaxIterations);

/// x = A z + b with A lower triangular and a positive diagonal.
class LinearTriangularMap final : public TriangularMap {
 public:
  LinearTriangularMap(Eigen::MatrixXd matrix, Eigen::VectorXd offset,
                      std::vector<Interval> domain = {});

  std::size_t dimension() const override { return static_cast<std::size_t>(matrix_.rows()); }
  Interval domain(std::size_t i) const override { return domain_.at(i); }
  void forward_prefix(std::span<const double> z, std::span<double> out) const override;
  double component(std::span<const double> prefix) const override;

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& offset() const { return offset_; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd offset_;
  std::vector<Interval> domain_;
};

/// Identity on the given box (the same interval for every coordinate).
MapPtr identity_map(std::size_t dimension, Interval domain = kUnitInterval);

/// Lazy composition outer ∘ inner; no coefficient re-expansion.
class ComposedMap final : public TriangularMap {
 public:
  ComposedMap(MapPtr outer, MapPtr inner);

  std::size_t dimension() const override { return inner_->dimension(); }
  Interval domain(std::size_t i) const override { return inner_->domain(i); }
  void forward_prefix(std::span<const double> z, std::span<double> out) const override;
  double component(std::span<const double> prefix) const override;

  const MapPtr& outer() const { return outer_; }
  const MapPtr& inner() const { return inner_; }

 private:
  MapPtr outer_;
  MapPtr inner_;
};

/// Throws DimensionMismatch when the dimensions differ.
MapPtr compose(MapPtr outer, MapPtr inner);

}  // namespace krpac::transport
