#include "krpac/dependency/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "krpac/dependency/lipschitz.hpp"
#include "krpac/errors.hpp"

namespace krpac::dependency {

OscillationVector::OscillationVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ParameterError(fmt::format("oscillation entries must be finite and nonnegative, got {}", v));
    }
  }
}

Eigen::VectorXd OscillationVector::as_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

namespace {

void check_site(std::size_t dim, std::size_t site, const Metric& metric) {
  const std::size_t bs = metric.block_size();
  if (dim % bs != 0) {
    throw DimensionMismatch(fmt::format("point length {} is not a multiple of block size {}", dim, bs));
  }
  if (site >= dim / bs) {
    throw ParameterError(fmt::format("site {} out of range for {} sites", site, dim / bs));
  }
}

}  // namespace

std::vector<PointPair> grid_pairs(std::span<const double> base, std::size_t site,
                                  const Metric& metric, std::span<const Interval> range,
                                  std::size_t levels) {
  check_site(base.size(), site, metric);
  const std::size_t bs = metric.block_size();
  if (range.size() != bs) {
    throw DimensionMismatch(fmt::format("range has {} sides, block size is {}", range.size(), bs));
  }
  std::vector<Point> grid = grid_levels(range, levels);
  std::vector<PointPair> pairs;
  pairs.reserve(grid.size() * (grid.size() - 1) / 2);
  const std::size_t offset = site * bs;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      PointPair p{Point(base.begin(), base.end()), Point(base.begin(), base.end())};
      std::copy(grid[a].begin(), grid[a].end(), p.first.begin() + offset);
      std::copy(grid[b].begin(), grid[b].end(), p.second.begin() + offset);
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

std::vector<PointPair> random_pairs(const transport::Box& box, std::size_t site,
                                    const Metric& metric, std::size_t count, std::uint64_t seed) {
  check_site(box.dimension(), site, metric);
  for (const Interval& side : box.sides) {
    if (!side.bounded()) throw ParameterError("random pairs need a bounded box");
  }
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t bs = metric.block_size();
  std::vector<PointPair> pairs(count);
  for (PointPair& p : pairs) {
    p.first.resize(box.dimension());
    for (std::size_t k = 0; k < box.dimension(); ++k) {
      p.first[k] = box.sides[k].lower + box.sides[k].length() * unit(engine);
    }
    p.second = p.first;
    for (std::size_t k = site * bs; k < (site + 1) * bs; ++k) {
      p.second[k] = box.sides[k].lower + box.sides[k].length() * unit(engine);
    }
  }
  return pairs;
}

OscillationEstimate local_oscillation(const ScalarFunction& f, std::size_t site,
                                      const Metric& metric, std::span<const PointPair> pairs) {
  const std::size_t bs = metric.block_size();
  OscillationEstimate est;
  for (const PointPair& p : pairs) {
    if (p.first.size() != p.second.size()) throw DimensionMismatch("pair points differ in length");
    check_site(p.first.size(), site, metric);
    const std::span<const double> a(p.first.data() + site * bs, bs);
    const std::span<const double> b(p.second.data() + site * bs, bs);
    const double rho = metric.distance(a, b);
    if (rho < kDegenerateDistance) continue;
    const double ratio = std::abs(f(p.first) - f(p.second)) / rho;
    est.value = std::max(est.value, ratio);
    ++est.pairs_used;
  }
  if (est.pairs_used == 0) {
    throw DegenerateError(fmt::format("all {} pairs for site {} are degenerate", pairs.size(), site));
  }
  return est;
}

OscillationEstimate local_oscillation(const ScalarFunction& f, std::size_t site,
                                      const Metric& metric, const OscillationDesign& design) {
  std::vector<PointPair> pairs;
  if (design.levels >= 2) {
    Point centre(design.box.dimension());
    for (std::size_t k = 0; k < centre.size(); ++k) {
      centre[k] = 0.5 * (design.box.sides[k].lower + design.box.sides[k].upper);
    }
    const std::size_t bs = metric.block_size();
    check_site(centre.size(), site, metric);
    std::span<const Interval> range(design.box.sides.data() + site * bs, bs);
    pairs = grid_pairs(centre, site, metric, range, design.levels);
  }
  std::vector<PointPair> extra = random_pairs(design.box, site, metric, design.pair_count, design.seed);
  pairs.insert(pairs.end(), std::make_move_iterator(extra.begin()),
               std::make_move_iterator(extra.end()));
  return local_oscillation(f, site, metric, pairs);
}

}  // namespace krpac::dependency
