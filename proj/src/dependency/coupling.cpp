#include "krpac/dependency/coupling.hpp"

#include <fmt/format.h>

#include "krpac/errors.hpp"
#include "krpac/parallel.hpp"

namespace krpac::dependency {

PointMap as_point_map(transport::MapPtr map) {
  return [map = std::move(map)](std::span<const double> in, std::span<double> out) {
    transport::check_domain(*map, in);
    map->forward_prefix(in, out);
  };
}

SampleMatrix couple(const PointMap& f, const PointMap& g, const transport::ReferenceMeasure& ref,
                    std::size_t n, std::uint64_t seed) {
  const SampleMatrix z = transport::sample_reference(ref, n, seed);
  const std::size_t d = ref.dimension();
  SampleMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(2 * d));
  for_each_chunk(n, kChunkSize, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto in = row_span(z, static_cast<Eigen::Index>(r));
      auto row = row_span(out, static_cast<Eigen::Index>(r));
      f(in, row.subspan(0, d));
      g(in, row.subspan(d, d));
    }
  });
  return out;
}

SampleMatrix couple(const transport::MapPtr& f, const transport::MapPtr& g,
                    const transport::ReferenceMeasure& ref, std::size_t n, std::uint64_t seed) {
  if (f->dimension() != ref.dimension() || g->dimension() != ref.dimension()) {
    throw DimensionMismatch(fmt::format("coupling maps of dimension {} and {} with reference of dimension {}",
                                        f->dimension(), g->dimension(), ref.dimension()));
  }
  return couple(as_point_map(f), as_point_map(g), ref, n, seed);
}

}  // namespace krpac::dependency
