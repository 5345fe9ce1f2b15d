#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "krpac/transport/reference.hpp"
#include "krpac/transport/triangular_map.hpp"

namespace krpac::dependency {

/// Any measurable map Z^d -> Z^d, not necessarily triangular.
using PointMap = std::function<void(std::span<const double>, std::span<double>)>;

PointMap as_point_map(transport::MapPtr map);

/// Rows (F(z), G(z)) for z ~ ref: the coupling of F#ref and G#ref induced by
/// the shared reference draw. Output has 2d columns.
SampleMatrix couple(const PointMap& f, const PointMap& g, const transport::ReferenceMeasure& ref,
                    std::size_t n, std::uint64_t seed);

/// Same with triangular maps; DimensionMismatch if any dimension differs.
SampleMatrix couple(const transport::MapPtr& f, const transport::MapPtr& g,
                    const transport::ReferenceMeasure& ref, std::size_t n, std::uint64_t seed);

}  // namespace krpac::dependency
