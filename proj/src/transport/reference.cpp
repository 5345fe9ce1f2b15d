#include "krpac/transport/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/erf.hpp>

#include "krpac/errors.hpp"
#include "krpac/parallel.hpp"

namespace krpac::transport {

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::uniform_unit_cube:
      return "uniform";
    case ReferenceKind::standard_normal_product:
      return "normal";
  }
  return "unknown";
}

ReferenceKind parse_reference_kind(const std::string& name) {
  if (name == "uniform" || name == "uniform-unit-cube") return ReferenceKind::uniform_unit_cube;
  if (name == "normal" || name == "standard-normal-product")
    return ReferenceKind::standard_normal_product;
  throw ConfigError("unknown reference kind '" + name + "'");
}

ReferenceMeasure::ReferenceMeasure(ReferenceKind kind, std::size_t dimension)
    : kind_(kind), dimension_(dimension) {}

Interval ReferenceMeasure::support() const {
  if (kind_ == ReferenceKind::uniform_unit_cube) return kUnitInterval;
  return kRealLine;
}

double ReferenceMeasure::cdf(double t) const {
  if (kind_ == ReferenceKind::uniform_unit_cube) return std::clamp(t, 0.0, 1.0);
  return 0.5 * std::erfc(-t / std::sqrt(2.0));
}

double ReferenceMeasure::quantile(double u) const {
  if (kind_ == ReferenceKind::uniform_unit_cube) return std::clamp(u, 0.0, 1.0);
  if (u <= 0.0) return -std::numeric_limits<double>::infinity();
  if (u >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

double ReferenceMeasure::mass(const Interval& interval) const {
  if (!(interval.upper > interval.lower)) return 0.0;
  return std::max(0.0, cdf(interval.upper) - cdf(interval.lower));
}

void ReferenceMeasure::fill(std::mt19937_64& engine, std::span<double> out) const {
  if (kind_ == ReferenceKind::uniform_unit_cube) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (double& x : out) x = dist(engine);
  } else {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (double& x : out) x = dist(engine);
  }
}

SampleMatrix sample_reference(const ReferenceMeasure& ref, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw EmptySampleError("sample_reference: n must be at least 1");
  const auto d = static_cast<Eigen::Index>(ref.dimension());
  SampleMatrix out(static_cast<Eigen::Index>(n), d);
  for_each_chunk(n, kChunkSize, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto engine = chunk_engine(seed, chunk);
    ref.fill(engine, {out.data() + begin * ref.dimension(), (end - begin) * ref.dimension()});
  });
  return out;
}

}  // namespace krpac::transport
