#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "krpac/certificate/certificate.hpp"
#include "krpac/errors.hpp"
#include "oracles.hpp"

namespace krpac::certificate {
namespace {

namespace oracle = testing::oracle;
using dependency::OscillationVector;
using dependency::ScaleMode;

CertificateInput banded_input(std::size_t d, std::size_t c, double alpha) {
  CertificateInput in;
  in.m = 1;
  in.d = d;
  in.diameter = 1.0;
  in.D = neighbourhood_matrix(d, c);
  in.oscillation = OscillationVector(std::vector<double>(d, alpha));
  in.kl = 1.0;
  in.delta = 0.05;
  return in;
}

TEST(Certify, WorkedExample) {
  auto in = banded_input(100, 3, 0.5);
  in.xi = 0.01;
  in.empirical_risk = 0.1;
  const auto r = certify(in);
  EXPECT_DOUBLE_EQ(r.d_delta_norm, 15.0);
  EXPECT_NEAR(r.gap, oracle::kWorkedGap, 1e-12);
  EXPECT_NEAR(r.total, oracle::kWorkedTotal, 1e-12);
  EXPECT_FALSE(r.vacuous);
}

TEST(Certify, NeighbourhoodIdentityIsExact) {
  for (std::size_t d : {4u, 16u, 100u, 256u}) {
    for (std::size_t c : {1u, 2u, 3u}) {
      const auto in = banded_input(d, c, 0.25);
      const double expected = static_cast<double>(c) * 0.25 * std::sqrt(static_cast<double>(d));
      EXPECT_NEAR(certify(in).d_delta_norm, expected, 1e-12 * expected);
    }
  }
}

TEST(Certify, RateIsInverseSqrtD) {
  const double ref = certify(banded_input(16, 3, 0.5)).gap * 4.0;
  for (std::size_t d : {64u, 256u}) {
    const double g = certify(banded_input(d, 3, 0.5)).gap * std::sqrt(static_cast<double>(d));
    EXPECT_NEAR(g, ref, 1e-12 * ref);
  }
}

TEST(Certify, ConservativeModeIsDTimesLarger) {
  const auto in = banded_input(10, 2, 0.3);
  EXPECT_NEAR(certify(in, ScaleMode::conservative).gap, 10.0 * certify(in).gap, 1e-12);
}

TEST(Certify, ZeroOscillationGivesZeroGap) {
  auto in = banded_input(8, 2, 0.0);
  in.empirical_risk = 0.2;
  in.xi = 0.05;
  const auto r = certify(in);
  EXPECT_EQ(r.gap, 0.0);
  EXPECT_DOUBLE_EQ(r.total, 0.25);
  EXPECT_TRUE(r.beta_schedule.empty());
}

TEST(Certify, Vacuous) {
  auto in = banded_input(2, 2, 5.0);
  in.m = 1;
  in.kl = 50.0;
  const auto r = certify(in, ScaleMode::conservative);
  EXPECT_TRUE(r.vacuous);
  EXPECT_LE(r.total_clamped, 1.0 + in.xi);
  EXPECT_GT(r.total, r.total_clamped);
}

TEST(Certify, Validation) {
  auto in = banded_input(4, 1, 0.1);
  in.delta = 0.7;  // above exp(-1/e)
  EXPECT_THROW(certify(in), ParameterError);
  in.delta = 0.0;
  EXPECT_THROW(certify(in), ParameterError);
  in = banded_input(4, 1, 0.1);
  in.D = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(certify(in), DimensionMismatch);
  in = banded_input(4, 1, 0.1);
  in.xi = 1.5;
  EXPECT_THROW(certify(in), ParameterError);
  in = banded_input(4, 1, 0.1);
  in.kl = -1.0;
  EXPECT_THROW(certify(in), ParameterError);
  EXPECT_NEAR(max_confidence(), 0.6922006275553464, 1e-15);
}

TEST(Certify, UniformGapIsTwiceOracle) {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    auto in = banded_input(1 + t % 30, 1 + t % 3, u(eng));
    in.m = 1 + static_cast<std::size_t>(1000 * u(eng));
    in.kl = 20.0 * u(eng);
    in.delta = 0.001 + 0.6 * u(eng);
    const auto r = certify(in);
    EXPECT_NEAR(r.gap, 2.0 * r.oracle_gap, 1e-12 * r.gap);
  }
}

TEST(BetaSchedule, WorkedAndBracketing) {
  const auto s = beta_schedule(0.05, 2, 1.0, 2);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0].beta_j, oracle::kBetaZero, 1e-12);
  EXPECT_NEAR(s[1].beta_j, 2.0 * oracle::kBetaZero, 1e-12);
  EXPECT_DOUBLE_EQ(s[0].delta_j, 0.025);
  EXPECT_DOUBLE_EQ(s[2].delta_j, 0.00625);
  EXPECT_THROW(beta_schedule(0.05, 1, 0.0, 2), DegenerateError);

  std::mt19937_64 eng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const double delta = 0.001 + 0.69 * u(eng);
    const double kl = 100.0 * u(eng) * u(eng);
    const std::size_t m = 1 + static_cast<std::size_t>(5000 * u(eng));
    const double norm = 0.01 + 5.0 * u(eng);
    const std::size_t js = j_star(kl, delta);
    const double bs = beta_star(kl, delta, m, norm);
    const double bj = beta_schedule(delta, m, norm, js).back().beta_j;
    EXPECT_GE(bj, 0.5 * bs * (1.0 - 1e-12));
    EXPECT_LE(bj, bs * (1.0 + 1e-12));
  }
}

TEST(JStar, Examples) {
  EXPECT_EQ(j_star(0.0, 0.05), 0u);
  const double l = std::log(20.0);
  EXPECT_EQ(j_star(2.9 * l, 0.05), 0u);
  EXPECT_EQ(j_star(3.1 * l, 0.05), 1u);
  EXPECT_EQ(j_star(15.1 * l, 0.05), 2u);
  std::size_t prev = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t j = j_star(k * 0.7, 0.05);
    EXPECT_GE(j, prev);
    prev = j;
  }
}

TEST(Certify, MonotoneInInputs) {
  auto in = banded_input(10, 2, 0.2);
  double prev = certify(in).gap;
  for (int k = 2; k < 10; ++k) {
    in.kl = k;
    const double g = certify(in).gap;
    EXPECT_GT(g, prev);
    prev = g;
  }
  in = banded_input(10, 2, 0.2);
  prev = certify(in).gap;
  for (std::size_t m : {2u, 10u, 100u}) {
    in.m = m;
    const double g = certify(in).gap;
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(Certify, ReportJson) {
  auto in = banded_input(5, 2, 0.1);
  const auto j = to_json(certify(in));
  EXPECT_TRUE(j.contains("gap"));
  EXPECT_TRUE(j.contains("beta_schedule"));
  EXPECT_EQ(j["mode"], "paper");
}

TEST(Neighbourhood, Structure) {
  const auto d = neighbourhood_matrix(4, 2);
  Eigen::MatrixXd e(4, 4);
  e << 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 1;
  EXPECT_EQ(d, e);
}

}  // namespace
}  // namespace krpac::certificate
