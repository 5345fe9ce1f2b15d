#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "krpac/types.hpp"

namespace krpac::transport {

enum class ReferenceKind { uniform_unit_cube, standard_normal_product };

std::string to_string(ReferenceKind kind);
ReferenceKind parse_reference_kind(const std::string& name);

/// Factorizing reference measure: d independent copies of U[0,1] or N(0,1).
class ReferenceMeasure {
 public:
  ReferenceMeasure(ReferenceKind kind, std::size_t dimension);

  ReferenceKind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }

  /// Same family in another dimension (used for the suffix ν^{d-i}).
  ReferenceMeasure marginal(std::size_t dimension) const { return {kind_, dimension}; }

  /// Support of one coordinate.
  Interval support() const;

  /// One-dimensional CDF and quantile of a single coordinate.
  double cdf(double t) const;
  double quantile(double u) const;

  /// Probability of [a, b] under one coordinate; 0 if b <= a.
  double mass(const Interval& interval) const;

  void fill(std::mt19937_64& engine, std::span<double> out) const;

 private:
  ReferenceKind kind_;
  std::size_t dimension_;
};

/// n i.i.d. rows from the reference, deterministic given seed.
SampleMatrix sample_reference(const ReferenceMeasure& ref, std::size_t n, std::uint64_t seed);

}  // namespace krpac::transport
