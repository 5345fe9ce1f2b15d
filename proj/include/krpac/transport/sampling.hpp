#pragma once

#include <cstdint>
#include <span>

#include "krpac/transport/good_set.hpp"
#include "krpac/transport/reference.hpp"
#include "krpac/transport/triangular_map.hpp"

namespace krpac::transport {

/// Rows T(z) for z ~ ref, deterministic given seed.
SampleMatrix pushforward_sample(const TriangularMap& map, const ReferenceMeasure& ref,
                                std::size_t n, std::uint64_t seed);

/// Samples of the suffix x^{(i,d]} conditioned on x^{[i]} = x_prefix:
/// T^{(i,d]}(zbar, tau) with zbar = invert_prefix(x_prefix) and tau ~ ref^{d-i}.
SampleMatrix conditional_sample(const TriangularMap& map, const ReferenceMeasure& ref,
                                std::span<const double> x_prefix, std::size_t n,
                                std::uint64_t seed);

/// Pushforward rows of map restricted to the reference set `good`, by rejection.
/// Validation helper; works with predicate-only good sets.
SampleMatrix rejection_sample(const TriangularMap& map, const ReferenceMeasure& ref,
                              const GoodSetSpec& good, std::size_t n, std::uint64_t seed);

}  // namespace krpac::transport
