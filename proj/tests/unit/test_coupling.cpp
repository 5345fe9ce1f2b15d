#include <gtest/gtest.h>

#include "generators.hpp"
#include "krpac/dependency/coupling.hpp"
#include "krpac/errors.hpp"
#include "krpac/stats.hpp"
#include "krpac/transport/sampling.hpp"

namespace krpac::dependency {
namespace {

std::vector<double> column(const SampleMatrix& m, Eigen::Index c) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) out[static_cast<std::size_t>(r)] = m(r, c);
  return out;
}

TEST(Coupling, DiagonalForEqualMaps) {
  const auto id = transport::identity_map(3);
  const SampleMatrix s = couple(id, id, {transport::ReferenceKind::uniform_unit_cube, 3}, 1000, 1);
  ASSERT_EQ(s.cols(), 6);
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) EXPECT_EQ(s(r, c), s(r, c + 3));
  }
}

TEST(Coupling, AntitheticSumsToOne) {
  const transport::ReferenceMeasure ref(transport::ReferenceKind::uniform_unit_cube, 1);
  const std::size_t n = 100'000;
  const SampleMatrix s = couple(as_point_map(transport::identity_map(1)), PointMap(testing::reflect), ref, n, 2);
  for (Eigen::Index r = 0; r < s.rows(); ++r) EXPECT_EQ(s(r, 0) + s(r, 1), 1.0);
  const auto uniform = [](double v) { return v; };
  EXPECT_LT(stats::ks_statistic(column(s, 0), uniform), stats::ks_critical_value(0.01, n));
  EXPECT_LT(stats::ks_statistic(column(s, 1), uniform), stats::ks_critical_value(0.01, n));
}

TEST(Coupling, MarginalsMatchPushforwards) {
  const transport::ReferenceMeasure ref(transport::ReferenceKind::uniform_unit_cube, 2);
  const auto f = testing::random_bernstein_map(2, 31);
  const auto g = testing::random_bernstein_map(2, 32);
  const std::size_t n = 100'000;
  const SampleMatrix s = couple(f, g, ref, n, 3);
  const SampleMatrix pf = transport::pushforward_sample(*f, ref, n, 4);
  const SampleMatrix pg = transport::pushforward_sample(*g, ref, n, 5);
  const double crit = stats::ks_critical_value(0.01, n, n);
  for (Eigen::Index c = 0; c < 2; ++c) {
    EXPECT_LT(stats::ks_statistic(column(s, c), column(pf, c)), crit);
    EXPECT_LT(stats::ks_statistic(column(s, c + 2), column(pg, c)), crit);
  }
}

TEST(Coupling, DimensionMismatch) {
  EXPECT_THROW(couple(transport::identity_map(2), transport::identity_map(3),
                      {transport::ReferenceKind::uniform_unit_cube, 2}, 10, 1),
               DimensionMismatch);
}

}  // namespace
}  // namespace krpac::dependency
