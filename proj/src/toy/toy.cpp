#include "krpac/toy/toy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "krpac/bad_set/bad_set.hpp"
#include "krpac/certificate/certificate.hpp"
#include "krpac/errors.hpp"
#include "krpac/io.hpp"
#include "krpac/parallel.hpp"
#include "krpac/transport/bernstein_map.hpp"
#include "krpac/transport/sampling.hpp"

namespace krpac::toy {

namespace {

constexpr std::size_t kT1Degree = 5;
constexpr std::size_t kT2PrefixDegree = 8;
constexpr std::size_t kT2Degree = 2;
constexpr double kDiagonalStep = 1e-6;

}  // namespace

ToyConfig toy_preset() {
  ToyConfig c;
  c.t1 = {3.0, 0.15, 3.0, 3.0, 0.15, 3.0};
  c.t2 = {{0.2, 0.2, 4.0}, {8.0, 0.2, 0.2}, {6.0, 0.2, 0.2}, {4.0, 0.3, 0.3}, {1.0, 1.0, 1.0},
          {0.3, 0.3, 4.0}, {0.2, 0.2, 6.0}, {0.2, 0.2, 8.0}, {0.2, 0.2, 8.0}};
  return c;
}

ToyConfig uniform_toy_config() {
  ToyConfig c;
  c.t1.assign(kT1Degree + 1, 1.0);
  c.t2.assign(kT2PrefixDegree + 1, std::vector<double>(kT2Degree + 1, 1.0));
  return c;
}

ToyConfig toy_config_from_json(const nlohmann::json& j) {
  ToyConfig c;
  try {
    c.t1 = j.at("t1").get<std::vector<double>>();
    c.t2 = j.at("t2").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("toy coefficients: {}", e.what()));
  }
  return c;
}

nlohmann::json to_json(const ToyConfig& config) { return {{"t1", config.t1}, {"t2", config.t2}}; }

transport::MapPtr build_toy_map(const ToyConfig& config) {
  if (config.t1.size() != kT1Degree + 1) {
    throw ParameterError(fmt::format("T_1 needs {} coefficients, got {}", kT1Degree + 1, config.t1.size()));
  }
  if (config.t2.size() != kT2PrefixDegree + 1) {
    throw ParameterError(fmt::format("T_2 needs {} coefficient rows, got {}", kT2PrefixDegree + 1, config.t2.size()));
  }
  std::vector<double> flat;
  for (const auto& row : config.t2) {
    if (row.size() != kT2Degree + 1) {
      throw ParameterError(fmt::format("T_2 rows need {} coefficients, got {}", kT2Degree + 1, row.size()));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  std::vector<transport::MonotoneComponent> comps;
  comps.emplace_back(std::vector<std::size_t>{kT1Degree}, config.t1);
  comps.emplace_back(std::vector<std::size_t>{kT2PrefixDegree, kT2Degree}, std::move(flat));
  return std::make_shared<transport::BernsteinMap>(std::move(comps));
}

double Landscape::global_max() const {
  return value.size() == 0 ? 0.0 : value.maxCoeff();
}

std::vector<double> Landscape::row_max() const {
  std::vector<double> out(size());
  for (Eigen::Index a = 0; a < value.rows(); ++a) out[static_cast<std::size_t>(a)] = value.row(a).maxCoeff();
  return out;
}

double Landscape::restricted_sup(double cap) const {
  const std::vector<double> rows = row_max();
  double sup = 0.0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (rows[a] > cap) continue;
    for (std::size_t b = 0; b < rows.size(); ++b) {
      if (rows[b] > cap) continue;
      sup = std::max(sup, value(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    }
  }
  return sup;
}

Landscape l12_landscape(const transport::TriangularMap& map, std::size_t grid, std::size_t n_mc,
                        std::uint64_t seed) {
  if (map.dimension() != 2) throw DimensionMismatch(fmt::format("toy map must be 2-dimensional, got {}", map.dimension()));
  if (grid < 2) throw ParameterError(fmt::format("landscape grid needs G >= 2, got {}", grid));
  if (n_mc == 0) throw EmptySampleError("landscape needs n_mc >= 1");
  const transport::ReferenceMeasure ref(transport::ReferenceKind::uniform_unit_cube, 1);
  const SampleMatrix tau = transport::sample_reference(ref, n_mc, seed);

  Landscape l;
  l.grid.resize(grid);
  for (std::size_t a = 0; a < grid; ++a) l.grid[a] = static_cast<double>(a) / static_cast<double>(grid - 1);

  // values[a * n_mc + k] = T_2(z_a, tau_k); diagonal needs the nudged points too.
  std::vector<double> values(grid * n_mc);
  std::vector<double> slope(grid * n_mc);
  for_each_chunk(grid, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const double z = l.grid[a];
      const double lo = std::max(0.0, z - kDiagonalStep);
      const double hi = std::min(1.0, z + kDiagonalStep);
      for (std::size_t k = 0; k < n_mc; ++k) {
        const double t = tau(static_cast<Eigen::Index>(k), 0);
        const double p[2] = {z, t};
        const double pl[2] = {lo, t};
        const double ph[2] = {hi, t};
        values[a * n_mc + k] = map.component(p);
        slope[a * n_mc + k] = std::abs(map.component(ph) - map.component(pl)) / (hi - lo);
      }
    }
  });

  l.value = Eigen::MatrixXd::Zero(grid, grid);
  l.std_error = Eigen::MatrixXd::Zero(grid, grid);
  const double n = static_cast<double>(n_mc);
  auto summarize = [&](auto&& term, double scale, double& mean_out, double& se_out) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < n_mc; ++k) {
      const double v = term(k);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = n_mc > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    mean_out = mean / scale;
    se_out = std::sqrt(var / n) / scale;
  };
  for_each_chunk(grid, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const auto ea = static_cast<Eigen::Index>(a);
      summarize([&](std::size_t k) { return slope[a * n_mc + k]; }, 1.0, l.value(ea, ea), l.std_error(ea, ea));
      for (std::size_t b = a + 1; b < grid; ++b) {
        const auto eb = static_cast<Eigen::Index>(b);
        const double dz = l.grid[b] - l.grid[a];
        summarize([&](std::size_t k) { return std::abs(values[a * n_mc + k] - values[b * n_mc + k]); }, dz,
                  l.value(ea, eb), l.std_error(ea, eb));
        l.value(eb, ea) = l.value(ea, eb);
        l.std_error(eb, ea) = l.std_error(ea, eb);
      }
    }
  });
  return l;
}

std::vector<TradeoffPoint> badset_tradeoff(const Landscape& landscape,
                                           const transport::TriangularMap& map,
                                           const transport::ReferenceMeasure& ref,
                                           std::span<const double> caps, std::size_t n,
                                           std::uint64_t seed) {
  if (!std::is_sorted(caps.begin(), caps.end())) throw ParameterError("caps must be sorted ascending");
  if (landscape.size() < 2) throw ParameterError("trade-off needs a landscape with at least 2 grid points");
  if (map.dimension() != 2 || ref.dimension() != 2) throw DimensionMismatch("toy trade-off is two-dimensional");
  if (ref.kind() != transport::ReferenceKind::uniform_unit_cube) {
    throw ParameterError("the toy landscape lives on the uniform reference");
  }
  // The landscape row of a data point x is fixed by z_1 = T_1^{-1}(x_1); with
  // pushforward samples that preimage is the reference draw itself.
  const SampleMatrix z = transport::sample_reference(ref, n, seed);
  const std::vector<double> rows = landscape.row_max();
  const double last = static_cast<double>(landscape.size() - 1);
  std::vector<double> point_max(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto idx = static_cast<std::size_t>(std::lround(z(static_cast<Eigen::Index>(r), 0) * last));
    point_max[r] = rows[std::min(idx, landscape.size() - 1)];
  }
  std::vector<TradeoffPoint> out;
  for (double cap : caps) {
    const auto count = std::count_if(point_max.begin(), point_max.end(), [cap](double v) { return v > cap; });
    out.push_back({cap, static_cast<double>(count) / static_cast<double>(n)});
  }
  return out;
}

namespace {

double toy_gap(double l12, const ImprovementContext& ctx) {
  certificate::CertificateInput in;
  in.m = ctx.m;
  in.d = 2;
  in.diameter = ctx.diameter;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2, 2);
  l(0, 1) = l12;
  in.D = dependency::build_D(l);
  in.oscillation = dependency::OscillationVector(ctx.oscillation);
  in.kl = ctx.kl;
  in.delta = ctx.delta;
  return certificate::certify(in, ctx.mode).gap;
}

}  // namespace

Improvement certificate_improvement(const Landscape& landscape,
                                    std::span<const TradeoffPoint> tradeoff, std::size_t n,
                                    const ImprovementContext& ctx) {
  Improvement imp;
  imp.baseline_gap = toy_gap(landscape.global_max(), ctx);
  imp.best_cap = std::numeric_limits<double>::infinity();
  imp.best_gap = imp.baseline_gap;
  imp.best_total = imp.baseline_gap;
  if (tradeoff.empty()) return imp;
  const double eps = ctx.epsilon / static_cast<double>(tradeoff.size());
  for (const TradeoffPoint& p : tradeoff) {
    const auto count = static_cast<std::size_t>(std::llround(p.xi * static_cast<double>(n)));
    const double xi = bad_set::hoeffding_upper_bound(count, n, eps);
    const double gap = toy_gap(std::min(p.cap, landscape.global_max()), ctx);
    if (gap + xi < imp.best_total) {
      imp.best_cap = p.cap;
      imp.best_gap = gap;
      imp.best_xi = xi;
      imp.best_total = gap + xi;
    }
  }
  imp.improves = imp.best_total < imp.baseline_gap;
  return imp;
}

ToyResults run_toy(const ToyRunConfig& config) {
  const transport::MapPtr map = build_toy_map(config.coefficients);
  const transport::ReferenceMeasure ref(transport::ReferenceKind::uniform_unit_cube, 2);
  ToyResults r;
  r.landscape = l12_landscape(*map, config.grid, config.n_mc, mix_seed(config.seed, 0));
  if (config.n_tradeoff > 0) {
    r.tradeoff = badset_tradeoff(r.landscape, *map, ref, config.caps, config.n_tradeoff, mix_seed(config.seed, 1));
    r.improvement = certificate_improvement(r.landscape, r.tradeoff, config.n_tradeoff, config.improvement);
  }
  if (config.n_scatter > 0) r.pushforward = transport::pushforward_sample(*map, ref, config.n_scatter, mix_seed(config.seed, 2));
  r.parameters = {{"grid", config.grid},
                  {"n_mc", config.n_mc},
                  {"n_tradeoff", config.n_tradeoff},
                  {"n_scatter", config.n_scatter},
                  {"caps", config.caps},
                  {"seed", config.seed},
                  {"coefficients", to_json(config.coefficients)}};
  return r;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::vector<std::string> emit_figures(const ToyResults& results, const std::filesystem::path& out_dir) {
  std::vector<std::string> warnings;
  nlohmann::json files = nlohmann::json::array();

  if (results.landscape.size() > 0) {
    std::string csv = "z1,z1p,L12\n";
    const Landscape& l = results.landscape;
    for (std::size_t a = 0; a < l.size(); ++a) {
      for (std::size_t b = 0; b < l.size(); ++b) {
        csv += fmt::format("{},{},{}\n", num(l.grid[a]), num(l.grid[b]),
                           num(l.value(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))));
      }
    }
    write_text_file(out_dir / "landscape.csv", csv);
    files.push_back("landscape.csv");
  } else {
    warnings.emplace_back("landscape is empty; landscape.csv not written");
  }

  if (!results.tradeoff.empty()) {
    std::string csv = "cap,xi\n";
    for (const TradeoffPoint& p : results.tradeoff) csv += fmt::format("{},{}\n", num(p.cap), num(p.xi));
    write_text_file(out_dir / "tradeoff.csv", csv);
    files.push_back("tradeoff.csv");
  } else {
    warnings.emplace_back("trade-off curve is empty; tradeoff.csv not written");
  }

  if (results.pushforward.rows() > 0) {
    std::string csv = "x1,x2\n";
    for (Eigen::Index r = 0; r < results.pushforward.rows(); ++r) {
      csv += fmt::format("{},{}\n", num(results.pushforward(r, 0)), num(results.pushforward(r, 1)));
    }
    write_text_file(out_dir / "pushforward.csv", csv);
    files.push_back("pushforward.csv");
  } else {
    warnings.emplace_back("no pushforward samples; pushforward.csv not written");
  }

  nlohmann::json manifest = {{"files", files}, {"parameters", results.parameters}, {"warnings", warnings}};
  if (results.landscape.size() > 0) {
    const Landscape& l = results.landscape;
    manifest["landscape"] = {{"global_max", l.global_max()},
                             {"symmetric", l.value == l.value.transpose()}};
  }
  if (!results.tradeoff.empty()) {
    const Improvement& imp = results.improvement;
    manifest["certificate_improvement"] = {{"baseline_gap", imp.baseline_gap},
                                           {"best_cap", imp.best_cap},
                                           {"best_gap", imp.best_gap},
                                           {"best_xi", imp.best_xi},
                                           {"best_total", imp.best_total},
                                           {"improves", imp.improves}};
  }
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return warnings;
}

}  // namespace krpac::toy
