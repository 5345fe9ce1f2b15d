#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "krpac/dependency/lipschitz.hpp"
#include "krpac/errors.hpp"
#include "krpac/toy/toy.hpp"

namespace krpac::dependency {
namespace {

const transport::ReferenceMeasure kUniform2{transport::ReferenceKind::uniform_unit_cube, 2};
const transport::ReferenceMeasure kUniform3{transport::ReferenceKind::uniform_unit_cube, 3};

ProfileDesign unit_design(std::size_t prefix_len, std::size_t levels) {
  ProfileDesign d;
  d.prefix.assign(prefix_len, 0.5);
  d.levels = grid_levels(std::vector<Interval>{kUnitInterval}, levels);
  return d;
}

TEST(Lipschitz, SeparableMapIsZero) {
  const auto map = testing::separable_bernstein_map(3, 5);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const auto p = lipschitz_profile(*map, kUniform3, i, j, Metric::absolute(), unit_design(i, 16), 1024, 7);
      EXPECT_LE(p.estimate, 10.0 * p.estimate_std_error);
    }
  }
}

TEST(Lipschitz, AveragingMapIsOneHalf) {
  const auto p = lipschitz_profile(*testing::averaging_map(), kUniform2, 0, 1, Metric::absolute(),
                                   unit_design(0, 64), 4096, 1);
  EXPECT_NEAR(p.estimate, 0.5, 0.01);
  EXPECT_EQ(p.ratio.rows(), 64);
  EXPECT_TRUE(std::isnan(p.ratio(3, 3)));
  EXPECT_NEAR(p.ratio(0, 63), 0.5, 1e-12);
}

TEST(Lipschitz, IdentityIsExactlyZero) {
  const auto p = lipschitz_profile(*transport::identity_map(3), kUniform3, 0, 2, Metric::absolute(),
                                   unit_design(0, 8), 256, 2);
  EXPECT_EQ(p.estimate, 0.0);
}

TEST(Lipschitz, NondecreasingUnderGridRefinement) {
  const auto map = toy::build_toy_map(toy::toy_preset());
  double previous = 0.0;
  for (std::size_t levels : {3u, 5u, 9u, 17u}) {
    const auto p = lipschitz_profile(*map, kUniform2, 0, 1, Metric::absolute(), unit_design(0, levels), 512, 4);
    EXPECT_GE(p.estimate, previous);
    previous = p.estimate;
  }
  EXPECT_GT(previous, 0.0);
}

TEST(Lipschitz, DeterministicGivenSeed) {
  const auto map = testing::random_bernstein_map(3, 18);
  const auto a = lipschitz_profile(*map, kUniform3, 1, 2, Metric::absolute(), unit_design(1, 6), 300, 8);
  const auto b = lipschitz_profile(*map, kUniform3, 1, 2, Metric::absolute(), unit_design(1, 6), 300, 8);
  for (Eigen::Index r = 0; r < a.ratio.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.ratio.cols(); ++c) {
      if (std::isnan(a.ratio(r, c))) {
        EXPECT_TRUE(std::isnan(b.ratio(r, c)));
      } else {
        EXPECT_EQ(a.ratio(r, c), b.ratio(r, c));
      }
    }
  }
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(profile_csv(a, unit_design(1, 6)), profile_csv(b, unit_design(1, 6)));
}

TEST(Lipschitz, Errors) {
  const auto map = testing::averaging_map();
  EXPECT_THROW(lipschitz_profile(*map, kUniform2, 1, 1, Metric::absolute(), unit_design(1, 4), 10, 1), ParameterError);
  EXPECT_THROW(lipschitz_profile(*map, kUniform2, 0, 1, Metric::absolute(), unit_design(1, 4), 10, 1),
               DimensionMismatch);
  ProfileDesign out_of_range = unit_design(0, 4);
  out_of_range.levels.push_back({1.5});
  EXPECT_THROW(lipschitz_profile(*map, kUniform2, 0, 1, Metric::absolute(), out_of_range, 10, 1), NoRootError);
  ProfileDesign degenerate;
  degenerate.levels = {{0.3}, {0.3}};
  EXPECT_THROW(lipschitz_profile(*map, kUniform2, 0, 1, Metric::absolute(), degenerate, 10, 1), DegenerateError);
}

TEST(Lipschitz, BlockSites) {
  // Two sites of two scalars; site 2 copies site 1 scaled by 0.5 plus fresh noise.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  a(2, 0) = 0.5;
  a(2, 2) = 0.5;
  a(3, 1) = 0.5;
  a(3, 3) = 0.5;
  const transport::LinearTriangularMap map(a, Eigen::VectorXd::Zero(4), std::vector<Interval>(4, kUnitInterval));
  const transport::ReferenceMeasure ref(transport::ReferenceKind::uniform_unit_cube, 4);
  ProfileDesign d;
  d.levels = grid_levels(std::vector<Interval>(2, kUnitInterval), 4);
  const auto p = lipschitz_profile(map, ref, 0, 1, Metric::component_sum({1.0, 1.0}), d, 64, 3);
  EXPECT_NEAR(p.estimate, 0.5, 1e-12);
  const Eigen::MatrixXd l = estimate_dependency(map, ref, Metric::component_sum({1.0, 1.0}),
                                                std::vector<Interval>(2, kUnitInterval), 4, 64, 3);
  EXPECT_NEAR(l(0, 1), 0.5, 1e-12);
  EXPECT_EQ(l(1, 0), 0.0);
}

}  // namespace
}  // namespace krpac::dependency
