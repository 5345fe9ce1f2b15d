#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "krpac/bad_set/bad_set.hpp"
#include "krpac/errors.hpp"
#include "krpac/parallel.hpp"
#include "krpac/toy/toy.hpp"
#include "krpac/transport/sampling.hpp"
#include "oracles.hpp"

namespace krpac::bad_set {
namespace {

namespace oracle = testing::oracle;
using transport::ReferenceKind;
using transport::ReferenceMeasure;

std::vector<Point> level_probes(std::size_t levels) {
  std::vector<Point> out;
  for (std::size_t k = 0; k < levels; ++k) out.push_back({(k + 0.5) / static_cast<double>(levels)});
  return out;
}

MembershipContext identity_context(std::size_t d) {
  MembershipContext ctx;
  ctx.map = transport::identity_map(d);
  ctx.ref = ReferenceMeasure(ReferenceKind::uniform_unit_cube, d);
  ctx.probes = level_probes(5);
  ctx.n_mc = 128;
  ctx.seed = 7;
  return ctx;
}

TEST(Hoeffding, WorkedValue) {
  EXPECT_NEAR(hoeffding_upper_bound(0, 5000, 0.05), oracle::kHoeffdingXi, 1e-15);
  EXPECT_NEAR(hoeffding_upper_bound(50, 5000, 0.05), 0.01 + oracle::kHoeffdingXi, 1e-15);
}

TEST(Hoeffding, ClampsAndRejects) {
  EXPECT_EQ(hoeffding_upper_bound(10, 10, 0.05), 1.0);
  EXPECT_EQ(hoeffding_upper_bound(0, 1, 0.05), 1.0);
  EXPECT_THROW(hoeffding_upper_bound(0, 100, 1.5), ParameterError);
  EXPECT_THROW(hoeffding_upper_bound(0, 100, 0.0), ParameterError);
  EXPECT_THROW(hoeffding_upper_bound(0, 0, 0.05), EmptySampleError);
  EXPECT_THROW(hoeffding_upper_bound(5, 4, 0.05), ParameterError);
}

TEST(Hoeffding, MonotoneInCountAndN) {
  for (std::size_t c = 0; c < 50; ++c) {
    EXPECT_LE(hoeffding_upper_bound(c, 1000, 0.05), hoeffding_upper_bound(c + 1, 1000, 0.05));
  }
  EXPECT_GT(hoeffding_upper_bound(0, 100, 0.05), hoeffding_upper_bound(0, 1000, 0.05));
}

TEST(Membership, IdentityMapNeverBad) {
  const auto ctx = identity_context(3);
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  for (int k = 0; k < 50; ++k) {
    const Point x{u(eng), u(eng), u(eng)};
    const auto r = membership(x, zero, ctx);
    EXPECT_FALSE(r.bad);
    EXPECT_FALSE(r.all_probes_degenerate);
  }
}

TEST(Membership, ToyArgmaxRegionIsBad) {
  const auto map = toy::build_toy_map(toy::toy_preset());
  const auto land = toy::l12_landscape(*map, 32, 1024, 5);
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  Eigen::MatrixXd off = land.value;
  off.diagonal().setZero();
  off.maxCoeff(&a, &b);
  ASSERT_NE(a, b);
  const Point x = transport::forward(*map, Point{land.grid[a], 0.5});
  const Point probe = transport::forward(*map, Point{land.grid[b], 0.5});

  MembershipContext ctx;
  ctx.map = map;
  ctx.ref = ReferenceMeasure(ReferenceKind::uniform_unit_cube, 2);
  ctx.probes = {Point{probe[0]}};
  ctx.n_mc = 2048;
  ctx.seed = 11;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2, 2);
  l(0, 1) = 0.5 * off(a, b);
  EXPECT_TRUE(membership(x, l, ctx).bad);
  l(0, 1) = 10.0 * off(a, b);
  EXPECT_FALSE(membership(x, l, ctx).bad);
}

TEST(Membership, AllProbesDegenerate) {
  auto ctx = identity_context(2);
  ctx.probes = {Point{0.3}};
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2);
  const auto r = membership(Point{0.3, 0.6}, zero, ctx);
  EXPECT_FALSE(r.bad);
  EXPECT_TRUE(r.all_probes_degenerate);
  EXPECT_EQ(r.degenerate_probes, 1u);
}

TEST(Membership, LargerLShrinksBadSet) {
  MembershipContext ctx;
  ctx.map = testing::random_bernstein_map(3, 21);
  ctx.ref = ReferenceMeasure(ReferenceKind::uniform_unit_cube, 3);
  ctx.probes = level_probes(4);
  ctx.n_mc = 128;
  ctx.seed = 2;
  const SampleMatrix xs = transport::pushforward_sample(*ctx.map, ctx.ref, 60, 9);
  Eigen::MatrixXd small = Eigen::MatrixXd::Zero(3, 3);
  small(0, 1) = 0.2;
  small(1, 2) = 0.3;
  const Eigen::MatrixXd large = small * 4.0 + Eigen::MatrixXd::Constant(3, 3, 0.1).triangularView<Eigen::StrictlyUpper>().toDenseMatrix();
  for (Eigen::Index r = 0; r < xs.rows(); ++r) {
    const auto ev = point_evidence(row_span(xs, r), ctx);
    if (is_bad(ev, large)) EXPECT_TRUE(is_bad(ev, small));
  }
}

TEST(Membership, EvidenceDeterministic) {
  MembershipContext ctx;
  ctx.map = testing::random_bernstein_map(3, 4);
  ctx.ref = ReferenceMeasure(ReferenceKind::uniform_unit_cube, 3);
  ctx.probes = level_probes(3);
  ctx.seed = 99;
  const Point x = transport::forward(*ctx.map, Point{0.2, 0.7, 0.4});
  EXPECT_EQ(point_evidence(x, ctx).excess, point_evidence(x, ctx).excess);
}

TEST(EstimateXi, CountsMembers) {
  SampleMatrix s(100, 1);
  for (int r = 0; r < 100; ++r) s(r, 0) = r / 100.0;
  BadSetCandidate c;
  c.lipschitz = Eigen::MatrixXd::Zero(1, 1);
  c.epsilon = 0.05;
  estimate_xi(s, c, [](std::span<const double> x) { return x[0] < 0.1; });
  EXPECT_EQ(c.violations, 10u);
  EXPECT_EQ(c.sample_size, 100u);
  EXPECT_NEAR(*c.xi, hoeffding_upper_bound(10, 100, 0.05), 0.0);
  EXPECT_THROW(estimate_xi(SampleMatrix(0, 1), c, [](auto) { return false; }), EmptySampleError);
}

CertificateContext cert_context(std::size_t d) {
  CertificateContext cert;
  cert.m = 1000;
  cert.oscillation = dependency::OscillationVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
  cert.kl = 1.0;
  cert.empirical_risk = 0.1;
  return cert;
}

TEST(SelectCandidate, SingleCandidate) {
  std::vector<BadSetCandidate> cands(1);
  cands[0].lipschitz = Eigen::MatrixXd::Zero(2, 2);
  cands[0].epsilon = 0.05;
  const SampleMatrix s = SampleMatrix::Constant(200, 2, 0.5);
  const auto rep = select_candidate(cands, s, [](std::size_t, auto) { return false; }, cert_context(2), 0.05);
  EXPECT_EQ(rep.chosen, 0u);
  ASSERT_EQ(rep.candidates.size(), 1u);
  EXPECT_NEAR(rep.candidates[0].total, 0.1 + rep.candidates[0].gap + rep.candidates[0].xi, 1e-15);
}

TEST(SelectCandidate, EverythingBadGivesXiOne) {
  std::vector<BadSetCandidate> cands(2);
  for (auto& c : cands) {
    c.lipschitz = Eigen::MatrixXd::Zero(2, 2);
    c.epsilon = 0.025;
  }
  cands[1].lipschitz(0, 1) = 3.0;
  const SampleMatrix s = SampleMatrix::Constant(200, 2, 0.5);
  const auto rep = select_candidate(
      cands, s, [](std::size_t k, auto) { return k == 0; }, cert_context(2), 0.05);
  EXPECT_EQ(rep.candidates[0].xi, 1.0);
  EXPECT_LT(rep.candidates[1].xi, 1.0);
  EXPECT_EQ(rep.chosen, 1u);
}

TEST(SelectCandidate, TiesGoToFirst) {
  std::vector<BadSetCandidate> cands(3);
  for (auto& c : cands) {
    c.lipschitz = Eigen::MatrixXd::Zero(2, 2);
    c.epsilon = 0.05 / 3.0;
  }
  const SampleMatrix s = SampleMatrix::Constant(50, 2, 0.5);
  const auto rep = select_candidate(cands, s, [](std::size_t, auto) { return false; }, cert_context(2), 0.05);
  EXPECT_EQ(rep.chosen, 0u);
}

TEST(SelectCandidate, BudgetMismatchRejected) {
  std::vector<BadSetCandidate> cands(2);
  for (auto& c : cands) {
    c.lipschitz = Eigen::MatrixXd::Zero(2, 2);
    c.epsilon = 0.03;
  }
  const SampleMatrix s = SampleMatrix::Constant(50, 2, 0.5);
  EXPECT_THROW(select_candidate(cands, s, [](std::size_t, auto) { return false; }, cert_context(2), 0.05),
               ParameterError);
}

TEST(SelectCandidate, ContextOverloadAgreesWithPredicate) {
  const auto ctx = identity_context(3);
  const std::vector<double> caps{0.0, 1.0};
  const std::vector<std::size_t> widths{1};
  auto a = banded_candidates(3, caps, widths, 0.05);
  auto b = a;
  const SampleMatrix s = transport::sample_reference(ctx.ref, 40, 3);
  const auto ra = select_candidate(a, s, ctx, cert_context(3), 0.05);
  const auto rb = select_candidate(
      b, s, [&](std::size_t k, std::span<const double> x) { return membership(x, b[k].lipschitz, ctx).bad; },
      cert_context(3), 0.05);
  EXPECT_EQ(ra.chosen, rb.chosen);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(ra.candidates[k].total, rb.candidates[k].total);
  EXPECT_EQ(to_json(ra)["candidates"].size(), 2u);
}

TEST(Candidates, Banded) {
  const std::vector<double> caps{0.5, 2.0};
  const std::vector<std::size_t> widths{1, 2};
  const auto c = banded_candidates(4, caps, widths, 0.05);
  ASSERT_EQ(c.size(), 4u);
  for (const auto& k : c) EXPECT_DOUBLE_EQ(k.epsilon, 0.0125);
  EXPECT_EQ(c[0].lipschitz(0, 1), 0.5);
  EXPECT_EQ(c[0].lipschitz(0, 2), 0.0);
  EXPECT_EQ(c[1].lipschitz(0, 2), 0.5);
  EXPECT_EQ(c[1].lipschitz(0, 3), 0.0);
  EXPECT_EQ(c[3].lipschitz(2, 3), 2.0);
  EXPECT_EQ(c[3].lipschitz(3, 2), 0.0);
}

TEST(Candidates, FromJson) {
  const auto j = nlohmann::json::parse(R"([
    {"L": {"band": {"cap": 1.5, "width": 1}}, "epsilon": 0.02},
    {"L": [[0, 0.3, 0], [0, 0, 0.4], [0, 0, 0]], "epsilon": 0.03}
  ])");
  const auto c = candidates_from_json(j, 3);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].lipschitz(1, 2), 1.5);
  EXPECT_EQ(c[0].lipschitz(0, 2), 0.0);
  EXPECT_EQ(c[1].lipschitz(1, 2), 0.4);
  EXPECT_THROW(candidates_from_json(j, 4), ConfigError);
  EXPECT_THROW(candidates_from_json(nlohmann::json::array(), 3), ConfigError);
  const auto bad = nlohmann::json::parse(R"([{"L": [[0, -1], [0, 0]], "epsilon": 0.05}])");
  EXPECT_THROW(candidates_from_json(bad, 2), ParameterError);
}

// Known bad-set mass 0.05: the upper bound must fail in at most ~eps of trials.
TEST(Coverage, SmallSimulation) {
  constexpr std::size_t kTrials = 300;
  constexpr std::size_t kN = 1000;
  constexpr double kXi = 0.05;
  std::size_t failures = 0;
  for (std::size_t t = 0; t < kTrials; ++t) {
    std::mt19937_64 eng(mix_seed(17, t));
    std::bernoulli_distribution bad(kXi);
    std::size_t count = 0;
    for (std::size_t k = 0; k < kN; ++k) count += bad(eng) ? 1 : 0;
    if (hoeffding_upper_bound(count, kN, 0.05) < kXi) ++failures;
  }
  const double sigma = std::sqrt(0.05 * 0.95 / kTrials);
  EXPECT_LE(static_cast<double>(failures) / kTrials, 0.05 + 3.0 * sigma);
}

}  // namespace
}  // namespace krpac::bad_set
