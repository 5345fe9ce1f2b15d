#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "generators.hpp"
#include "krpac/errors.hpp"
#include "krpac/io.hpp"
#include "krpac/toy/toy.hpp"
#include "krpac/transport/sampling.hpp"
#include "oracles.hpp"

namespace krpac::toy {
namespace {

namespace fs = std::filesystem;
namespace oracle = testing::oracle;
const transport::ReferenceMeasure kRef(transport::ReferenceKind::uniform_unit_cube, 2);

TEST(ToyMap, UniformConfigIsIdentity) {
  const auto map = build_toy_map(uniform_toy_config());
  for (double a : {0.0, 0.13, 0.5, 0.77, 1.0}) {
    for (double b : {0.0, 0.31, 0.9}) {
      const Point x = transport::forward(*map, Point{a, b});
      EXPECT_NEAR(x[0], a, 1e-14);
      EXPECT_NEAR(x[1], b, 1e-14);
    }
  }
}

TEST(ToyMap, PresetMatchesIndependentEvaluation) {
  const auto map = build_toy_map(toy_preset());
  for (const auto& p : oracle::kToyPoints) {
    const Point x = transport::forward(*map, Point{p.z1, p.z2});
    EXPECT_NEAR(x[0], p.t1, 1e-12);
    EXPECT_NEAR(x[1], p.t2, 1e-12);
  }
}

TEST(ToyMap, PresetIsMultimodal) {
  const auto map = build_toy_map(toy_preset());
  const SampleMatrix xs = transport::pushforward_sample(*map, kRef, 1'000'000, 12);
  std::vector<double> x1(xs.rows());
  std::vector<double> x2(xs.rows());
  for (Eigen::Index r = 0; r < xs.rows(); ++r) {
    x1[r] = xs(r, 0);
    x2[r] = xs(r, 1);
  }
  EXPECT_GE(oracle::count_modes(x1, x2), 2u);
}

TEST(ToyMap, WrongShapesRejected) {
  auto c = toy_preset();
  c.t1.pop_back();
  EXPECT_THROW(build_toy_map(c), ParameterError);
  c = toy_preset();
  c.t2[3].push_back(1.0);
  EXPECT_THROW(build_toy_map(c), ParameterError);
  c = toy_preset();
  c.t2.pop_back();
  EXPECT_THROW(build_toy_map(c), ParameterError);
}

TEST(ToyMap, JsonRoundTrip) {
  const auto c = toy_preset();
  const auto back = toy_config_from_json(to_json(c));
  EXPECT_EQ(back.t1, c.t1);
  EXPECT_EQ(back.t2, c.t2);
}

TEST(Landscape, IdentityIsZero) {
  const auto land = l12_landscape(*build_toy_map(uniform_toy_config()), 16, 256, 1);
  EXPECT_LT(land.value.cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(land.restricted_sup(1e-8), land.global_max());
}

TEST(Landscape, AveragingMapIsHalf) {
  const auto land = l12_landscape(*testing::averaging_map(), 16, 256, 2);
  for (Eigen::Index a = 0; a < 16; ++a) {
    for (Eigen::Index b = 0; b < 16; ++b) EXPECT_NEAR(land.value(a, b), 0.5, 1e-6);
  }
}

TEST(Landscape, ExactlySymmetric) {
  const auto land = l12_landscape(*build_toy_map(toy_preset()), 24, 512, 3);
  EXPECT_EQ(land.value, land.value.transpose());
  EXPECT_EQ(land.std_error, land.std_error.transpose());
  EXPECT_EQ(land.grid.front(), 0.0);
  EXPECT_EQ(land.grid.back(), 1.0);
}

TEST(Landscape, RestrictedSupRespectsCap) {
  const auto land = l12_landscape(*build_toy_map(toy_preset()), 24, 512, 4);
  const auto rm = land.row_max();
  for (double cap : {0.5, 1.0, 2.0, 4.0, 100.0}) {
    EXPECT_LE(land.restricted_sup(cap), cap);
  }
  EXPECT_EQ(land.restricted_sup(1e9), land.global_max());
  EXPECT_EQ(*std::max_element(rm.begin(), rm.end()), land.global_max());
}

TEST(Tradeoff, EndpointsAndMonotone) {
  const auto map = build_toy_map(toy_preset());
  const auto land = l12_landscape(*map, 24, 512, 5);
  const std::vector<double> caps{0.0, 0.5, 1.0, 2.0, 4.0, land.global_max()};
  const auto t = badset_tradeoff(land, *map, kRef, caps, 20'000, 6);
  ASSERT_EQ(t.size(), caps.size());
  EXPECT_EQ(t.front().xi, 1.0);
  EXPECT_EQ(t.back().xi, 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LE(t[k].xi, t[k - 1].xi);
  const std::vector<double> unsorted{1.0, 0.5};
  EXPECT_THROW(badset_tradeoff(land, *map, kRef, unsorted, 100, 1), ParameterError);
}

TEST(Improvement, NoExclusionBaseline) {
  const auto map = build_toy_map(toy_preset());
  const auto land = l12_landscape(*map, 24, 512, 5);
  const std::vector<double> caps{land.global_max()};
  const auto t = badset_tradeoff(land, *map, kRef, caps, 1000, 6);
  const auto imp = certificate_improvement(land, t, 1000, {});
  EXPECT_GT(imp.baseline_gap, 0.0);
  EXPECT_FALSE(imp.improves);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("krpac_toy_" + name);
  fs::remove_all(p);
  return p;
}

ToyRunConfig small_run(std::uint64_t seed) {
  ToyRunConfig cfg;
  cfg.grid = 16;
  cfg.n_mc = 256;
  cfg.n_tradeoff = 5000;
  cfg.n_scatter = 500;
  cfg.seed = seed;
  return cfg;
}

TEST(Figures, ByteIdenticalForSameSeed) {
  const fs::path a = scratch("a");
  const fs::path b = scratch("b");
  emit_figures(run_toy(small_run(42)), a);
  emit_figures(run_toy(small_run(42)), b);
  for (const char* f : {"landscape.csv", "tradeoff.csv", "pushforward.csv", "manifest.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(read_text_file(a / f), read_text_file(b / f)) << f;
  }
  EXPECT_EQ(read_text_file(a / "landscape.csv").substr(0, 13), "z1,z1p,L12\n0,");
  const fs::path c = scratch("c");
  emit_figures(run_toy(small_run(43)), c);
  EXPECT_NE(read_text_file(a / "pushforward.csv"), read_text_file(c / "pushforward.csv"));
}

TEST(Figures, EmptyResultsWriteManifestOnly) {
  const fs::path p = scratch("empty");
  const auto warnings = emit_figures(ToyResults{}, p);
  EXPECT_EQ(warnings.size(), 3u);
  EXPECT_TRUE(fs::exists(p / "manifest.json"));
  EXPECT_FALSE(fs::exists(p / "landscape.csv"));
  const auto m = nlohmann::json::parse(read_text_file(p / "manifest.json"));
  EXPECT_EQ(m["warnings"].size(), 3u);
}

}  // namespace
}  // namespace krpac::toy
