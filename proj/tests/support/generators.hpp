#pragma once

#include <cstdint>

#include "krpac/transport/bernstein_map.hpp"
#include "krpac/transport/triangular_map.hpp"

namespace krpac::testing {

/// Random Bernstein map on [0,1]^d with prefix degrees in [0, 3], density
/// degrees in [1, 4] and coefficients in [0.2, 2].
transport::MapPtr random_bernstein_map(std::size_t d, std::uint64_t seed);

/// Random Bernstein map whose components ignore their prefix entirely.
transport::MapPtr separable_bernstein_map(std::size_t d, std::uint64_t seed);

/// T(z) = z^2 on [0, 1] (density 2t).
transport::MapPtr square_map();

/// T(z) = (z_1, 0.5 z_1 + 0.5 z_2) on [0,1]^2.
transport::MapPtr averaging_map();

/// T(z) = 0.5 + 0.5 z on [0, 1].
transport::MapPtr shift_half_map();

/// 1 - z on [0, 1]; decreasing, so only usable as a coupling map.
void reflect(std::span<const double> in, std::span<double> out);

}  // namespace krpac::testing
