#include "krpac/transport/sampling.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "krpac/errors.hpp"
#include "krpac/parallel.hpp"

namespace krpac::transport {

namespace {

void require_same_dimension(const TriangularMap& map, const ReferenceMeasure& ref) {
  if (map.dimension() != ref.dimension())
    throw DimensionMismatch(fmt::format("map dimension {} vs reference dimension {}",
                                        map.dimension(), ref.dimension()));
}

}  // namespace

SampleMatrix pushforward_sample(const TriangularMap& map, const ReferenceMeasure& ref,
                                std::size_t n, std::uint64_t seed) {
  require_same_dimension(map, ref);
  SampleMatrix z = sample_reference(ref, n, seed);
  SampleMatrix x(z.rows(), z.cols());
  for_each_chunk(n, kChunkSize, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      check_domain(map, row_span(z, row));
      map.forward_prefix(row_span(z, row), row_span(x, row));
    }
  });
  return x;
}

SampleMatrix conditional_sample(const TriangularMap& map, const ReferenceMeasure& ref,
                                std::span<const double> x_prefix, std::size_t n,
                                std::uint64_t seed) {
  require_same_dimension(map, ref);
  if (n == 0) throw EmptySampleError("conditional_sample: n must be at least 1");
  const std::size_t d = map.dimension();
  const std::size_t i = x_prefix.size();
  if (i > d) throw DimensionMismatch("conditional_sample: prefix longer than the map");

  const Point zbar = invert_prefix(map, x_prefix);
  const auto rest = static_cast<Eigen::Index>(d - i);
  SampleMatrix out(static_cast<Eigen::Index>(n), rest);
  if (rest == 0) return out;

  const SampleMatrix tau = sample_reference(ref.marginal(d - i), n, seed);
  for_each_chunk(n, kChunkSize, [&](std::size_t, std::size_t begin, std::size_t end) {
    Point z(d);
    Point x(d);
    std::copy(zbar.begin(), zbar.end(), z.begin());
    for (std::size_t r = begin; r < end; ++r) {
      const auto t = row_span(tau, static_cast<Eigen::Index>(r));
      std::copy(t.begin(), t.end(), z.begin() + static_cast<std::ptrdiff_t>(i));
      check_domain(map, z);
      map.forward_prefix(z, x);
      std::copy(x.begin() + static_cast<std::ptrdiff_t>(i), x.end(),
                row_span(out, static_cast<Eigen::Index>(r)).begin());
    }
  });
  return out;
}

SampleMatrix rejection_sample(const TriangularMap& map, const ReferenceMeasure& ref,
                              const GoodSetSpec& good, std::size_t n, std::uint64_t seed) {
  require_same_dimension(map, ref);
  if (n == 0) throw EmptySampleError("rejection_sample: n must be at least 1");
  const std::size_t d = map.dimension();
  SampleMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::size_t filled = 0;
  Point x(d);
  // Rounds of fixed size keep the draw sequence independent of acceptance.
  for (std::uint64_t round = 0; filled < n; ++round) {
    if (round > 10'000) throw DegenerateError("rejection_sample: acceptance rate too low");
    const SampleMatrix z = sample_reference(ref, std::max<std::size_t>(n, kChunkSize),
                                            mix_seed(seed, round));
    for (Eigen::Index r = 0; r < z.rows() && filled < n; ++r) {
      const auto zr = row_span(z, r);
      if (!good.contains(zr)) continue;
      map.forward_prefix(zr, x);
      std::copy(x.begin(), x.end(), row_span(out, static_cast<Eigen::Index>(filled)).begin());
      ++filled;
    }
  }
  return out;
}

}  // namespace krpac::transport
