#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "krpac/dependency/dependency_matrix.hpp"
#include "krpac/transport/reference.hpp"
#include "krpac/transport/triangular_map.hpp"

namespace krpac::toy {

/// Coefficients of the two-dimensional Bernstein map. T_1 has a degree-5
/// density; T_2 has a degree-2 density in z_2 whose three coefficient
/// functions are degree-8 Bernstein polynomials in z_1 (rows = z_1 basis).
struct ToyConfig {
  std::vector<double> t1;               ///< 6 values
  std::vector<std::vector<double>> t2;  ///< 9 rows of 3 values
};

/// Multimodal default with a heavy-tailed L_12 landscape.
ToyConfig toy_preset();
/// All-ones coefficients, i.e. the identity on [0,1]^2.
ToyConfig uniform_toy_config();

ToyConfig toy_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ToyConfig& config);

/// ParameterError on wrong shapes; negative coefficients are rejected by the
/// component constructor.
transport::MapPtr build_toy_map(const ToyConfig& config);

/// L_12 landscape over a uniform grid in z_1.
struct Landscape {
  std::vector<double> grid;  ///< z_1 values, G points on [0, 1]
  Eigen::MatrixXd value;     ///< symmetric G x G
  Eigen::MatrixXd std_error;

  std::size_t size() const { return grid.size(); }
  double global_max() const;
  /// max_b value(a, b) for every row a.
  std::vector<double> row_max() const;
  /// Largest entry among rows and columns whose row max is <= cap; 0 if none.
  double restricted_sup(double cap) const;
};

/// Off-diagonal entries E_tau |T_2(z_a, tau) - T_2(z_b, tau)| / |z_a - z_b| with the
/// same tau draws for every cell; diagonal entries use a central difference.
Landscape l12_landscape(const transport::TriangularMap& map, std::size_t grid, std::size_t n_mc,
                        std::uint64_t seed);

struct TradeoffPoint {
  double cap = 0.0;
  double xi = 0.0;  ///< empirical mass of points whose landscape row max exceeds cap
};

/// For each cap, the fraction of n pushforward samples whose z_1 falls on a
/// landscape row with maximum above the cap. Caps must be ascending.
std::vector<TradeoffPoint> badset_tradeoff(const Landscape& landscape,
                                           const transport::TriangularMap& map,
                                           const transport::ReferenceMeasure& ref,
                                           std::span<const double> caps, std::size_t n,
                                           std::uint64_t seed);

/// Certificate terms used to judge whether excluding a bad set pays off.
struct ImprovementContext {
  std::size_t m = 100;
  double diameter = 1.0;
  std::vector<double> oscillation{0.5, 0.5};
  double kl = 5.0;
  double delta = 0.05;
  double epsilon = 0.05;  ///< shared equally by all caps
  dependency::ScaleMode mode = dependency::ScaleMode::paper;
};

struct Improvement {
  double baseline_gap = 0.0;  ///< L_12 = global landscape max, no exclusion
  double best_cap = 0.0;
  double best_gap = 0.0;
  double best_xi = 0.0;  ///< Hoeffding bound at the best cap
  double best_total = 0.0;  ///< best_gap + best_xi
  bool improves = false;    ///< best_total < baseline_gap
};

Improvement certificate_improvement(const Landscape& landscape,
                                    std::span<const TradeoffPoint> tradeoff, std::size_t n,
                                    const ImprovementContext& ctx);

struct ToyRunConfig {
  ToyConfig coefficients = toy_preset();
  std::size_t grid = 64;
  std::size_t n_mc = 4096;
  std::size_t n_tradeoff = 100000;
  std::size_t n_scatter = 5000;
  std::vector<double> caps{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0};
  ImprovementContext improvement;
  std::uint64_t seed = 0;
};

struct ToyResults {
  Landscape landscape;
  std::vector<TradeoffPoint> tradeoff;
  SampleMatrix pushforward;
  Improvement improvement;
  nlohmann::json parameters;
};

ToyResults run_toy(const ToyRunConfig& config);

/// Writes landscape.csv, tradeoff.csv, pushforward.csv and manifest.json into
/// out_dir; parts with no data are skipped and noted as warnings in the
/// manifest. Returns the warnings. IoError when a file cannot be written.
std::vector<std::string> emit_figures(const ToyResults& results, const std::filesystem::path& out_dir);

}  // namespace krpac::toy
