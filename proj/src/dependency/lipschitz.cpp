#include "krpac/dependency/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "krpac/errors.hpp"
#include "krpac/parallel.hpp"

namespace krpac::dependency {

std::vector<Point> grid_levels(std::span<const Interval> range, std::size_t levels) {
  if (levels < 2) throw ParameterError(fmt::format("grid needs at least 2 levels, got {}", levels));
  for (const Interval& side : range) {
    if (!side.bounded()) throw ParameterError("grid range must be bounded");
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < range.size(); ++k) total *= levels;
  std::vector<Point> grid(total, Point(range.size()));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = range.size(); k-- > 0;) {
      const std::size_t level = rest % levels;
      rest /= levels;
      grid[idx][k] = range[k].lower +
                     range[k].length() * static_cast<double>(level) / static_cast<double>(levels - 1);
    }
  }
  return grid;
}

LipschitzProfile lipschitz_profile(const transport::TriangularMap& map,
                                   const transport::ReferenceMeasure& ref, std::size_t i,
                                   std::size_t j, const Metric& metric, const ProfileDesign& design,
                                   std::size_t n_mc, std::uint64_t seed) {
  const std::size_t bs = metric.block_size();
  const std::size_t dim = map.dimension();
  if (dim % bs != 0 || ref.dimension() != dim) {
    throw DimensionMismatch(fmt::format("map dimension {}, reference dimension {}, block size {}",
                                        dim, ref.dimension(), bs));
  }
  const std::size_t sites = dim / bs;
  if (j <= i || j >= sites) {
    throw ParameterError(fmt::format("need i < j < {}, got i={} j={}", sites, i, j));
  }
  if (design.prefix.size() != i * bs) {
    throw DimensionMismatch(fmt::format("prefix has {} scalars, expected {}", design.prefix.size(), i * bs));
  }
  if (design.levels.size() < 2) throw ParameterError("profile needs at least two levels");
  if (n_mc == 0) throw EmptySampleError("profile needs n_mc >= 1");

  const std::size_t g = design.levels.size();
  const std::size_t head = (i + 1) * bs;
  const std::size_t tail = dim - head;
  const std::size_t out_len = (j + 1) * bs;

  // Reference-space prefixes of every level point.
  std::vector<Point> zhat(g);
  for (std::size_t a = 0; a < g; ++a) {
    if (design.levels[a].size() != bs) throw DimensionMismatch("level point has wrong block size");
    Point x(design.prefix);
    x.insert(x.end(), design.levels[a].begin(), design.levels[a].end());
    zhat[a] = transport::invert_prefix(map, x);
  }

  // Shared tau draws keep the estimate monotone under grid refinement.
  const SampleMatrix tau = transport::sample_reference(ref.marginal(tail), n_mc, seed);

  // outputs[a] holds block j of the map at (zhat_a, tau_k), n_mc rows of bs scalars.
  std::vector<std::vector<double>> outputs(g, std::vector<double>(n_mc * bs));
  for_each_chunk(n_mc, kChunkSize, [&](std::size_t, std::size_t begin, std::size_t end) {
    Point z(out_len);
    Point x(out_len);
    for (std::size_t k = begin; k < end; ++k) {
      const auto t = row_span(tau, static_cast<Eigen::Index>(k));
      for (std::size_t s = head; s < out_len; ++s) z[s] = t[s - head];
      for (std::size_t a = 0; a < g; ++a) {
        std::copy(zhat[a].begin(), zhat[a].end(), z.begin());
        map.forward_prefix(z, x);
        std::copy(x.begin() + j * bs, x.end(), outputs[a].begin() + k * bs);
      }
    }
  });

  LipschitzProfile profile;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  profile.ratio = Eigen::MatrixXd::Constant(g, g, nan);
  profile.std_error = Eigen::MatrixXd::Constant(g, g, nan);
  for_each_chunk(g, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = a + 1; b < g; ++b) {
        const double rho = metric.distance(design.levels[a], design.levels[b]);
        if (rho < kDegenerateDistance) continue;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t k = 0; k < n_mc; ++k) {
          const double v = metric.distance(
              std::span<const double>(outputs[a].data() + k * bs, bs),
              std::span<const double>(outputs[b].data() + k * bs, bs));
          sum += v;
          sum_sq += v * v;
        }
        const double n = static_cast<double>(n_mc);
        const double mean = sum / n;
        const double var = n_mc > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
        const auto ea = static_cast<Eigen::Index>(a);
        const auto eb = static_cast<Eigen::Index>(b);
        profile.ratio(ea, eb) = profile.ratio(eb, ea) = mean / rho;
        profile.std_error(ea, eb) = profile.std_error(eb, ea) = std::sqrt(var / n) / rho;
      }
    }
  });

  bool found = false;
  for (Eigen::Index a = 0; a < profile.ratio.rows(); ++a) {
    for (Eigen::Index b = 0; b < profile.ratio.cols(); ++b) {
      const double r = profile.ratio(a, b);
      if (std::isnan(r)) continue;
      if (!found || r > profile.estimate) {
        found = true;
        profile.estimate = r;
        profile.estimate_std_error = profile.std_error(a, b);
        profile.argmax_first = static_cast<std::size_t>(a);
        profile.argmax_second = static_cast<std::size_t>(b);
      }
    }
  }
  if (!found) throw DegenerateError("every level pair of the profile is degenerate");
  return profile;
}

namespace {

std::string format_level(const Point& level) {
  std::string out;
  for (std::size_t k = 0; k < level.size(); ++k) {
    if (k > 0) out += ';';
    out += fmt::format("{:.17g}", level[k]);
  }
  return out;
}

}  // namespace

std::string profile_csv(const LipschitzProfile& profile, const ProfileDesign& design) {
  std::string out = "v_i,z_i,ratio_estimate,std_error\n";
  for (Eigen::Index a = 0; a < profile.ratio.rows(); ++a) {
    for (Eigen::Index b = 0; b < profile.ratio.cols(); ++b) {
      if (std::isnan(profile.ratio(a, b))) continue;
      out += fmt::format("{},{},{:.17g},{:.17g}\n", format_level(design.levels[static_cast<std::size_t>(a)]),
                         format_level(design.levels[static_cast<std::size_t>(b)]), profile.ratio(a, b),
                         profile.std_error(a, b));
    }
  }
  return out;
}

Eigen::MatrixXd estimate_dependency(const transport::TriangularMap& map,
                                    const transport::ReferenceMeasure& ref, const Metric& metric,
                                    std::span<const Interval> site_range, std::size_t levels,
                                    std::size_t n_mc, std::uint64_t seed) {
  const std::size_t bs = metric.block_size();
  if (site_range.size() != bs) throw DimensionMismatch("site range must have one side per block scalar");
  const std::size_t sites = map.dimension() / bs;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(sites, sites);
  const std::vector<Point> grid = grid_levels(site_range, levels);
  for (std::size_t i = 0; i + 1 < sites; ++i) {
    ProfileDesign design;
    for (std::size_t s = 0; s < i; ++s) {
      for (const Interval& side : site_range) design.prefix.push_back(0.5 * (side.lower + side.upper));
    }
    design.levels = grid;
    for (std::size_t j = i + 1; j < sites; ++j) {
      const auto profile =
          lipschitz_profile(map, ref, i, j, metric, design, n_mc, mix_seed(seed, i * sites + j));
      l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = profile.estimate;
    }
  }
  return l;
}

}  // namespace krpac::dependency
