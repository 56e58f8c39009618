#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lh3/errors.hpp"
#include "lh3/models.hpp"
#include "oracles.hpp"

namespace {

using lh3::BallPoint;
using lh3::cd;
using lh3::UpperHalfPoint;

TEST(Models, UnitPointMapsToBallOrigin) {
  const BallPoint q = lh3::uhs_to_ball({1.0, 0.0});
  for (double c : q.y) EXPECT_NEAR(c, 0.0, 1e-15);
}

TEST(Models, HandComputedPoint) {
  const BallPoint q = lh3::uhs_to_ball({1.0, 1.0});
  EXPECT_NEAR(q.y[0], 0.4, 1e-15);
  EXPECT_NEAR(q.y[1], 0.0, 1e-15);
  EXPECT_NEAR(q.y[2], 0.2, 1e-15);
}

TEST(Models, HighPointsApproachTheNorthPole) {
  const BallPoint q = lh3::uhs_to_ball({1e8, cd(0.3, 0.2)});
  EXPECT_NEAR(q.y[0], 0.0, 1e-7);
  EXPECT_NEAR(q.y[1], 0.0, 1e-7);
  EXPECT_NEAR(q.y[2], 1.0, 1e-7);
}

TEST(Models, InverseOfHandComputedPoints) {
  const UpperHalfPoint o = lh3::ball_to_uhs({{0.0, 0.0, 0.0}});
  EXPECT_NEAR(o.t, 1.0, 1e-15);
  EXPECT_NEAR(std::abs(o.z), 0.0, 1e-15);
  const UpperHalfPoint p = lh3::ball_to_uhs({{0.4, 0.0, 0.2}});
  EXPECT_NEAR(p.t, 1.0, 1e-14);
  EXPECT_NEAR(std::abs(p.z - cd(1.0)), 0.0, 1e-14);
}

TEST(Models, BallRoundTrip) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  int tested = 0;
  while (tested < 200) {
    BallPoint q{{c(rng), c(rng), c(rng)}};
    const double n = std::sqrt(q.y[0] * q.y[0] + q.y[1] * q.y[1] + q.y[2] * q.y[2]);
    if (n >= 0.9) continue;
    const BallPoint back = lh3::uhs_to_ball(lh3::ball_to_uhs(q));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(back.y[k], q.y[k], 1e-12);
    ++tested;
  }
}

TEST(Models, BoundaryGuard) {
  try {
    lh3::ball_to_uhs({{0.0, 1.0 - 1e-12, 0.0}});
    FAIL();
  } catch (const lh3::Error& e) {
    EXPECT_EQ(e.kind(), lh3::ErrorKind::NearBoundary);
  }
}

TEST(Models, MetricCoefficients) {
  const auto g = lh3::metric_tensor(UpperHalfPoint{2.0, 0.0});
  const auto h = lh3::metric_tensor(BallPoint{});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      EXPECT_NEAR(g[a][b], a == b ? 0.25 : 0.0, 1e-15);
      EXPECT_NEAR(h[a][b], a == b ? 4.0 : 0.0, 1e-15);
    }
}

TEST(Models, BallMetricPullsBackToUpperHalfSpaceMetric) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> t(0.3, 3.0), x(-2.0, 2.0);
  for (int n = 0; n < 20; ++n) {
    const UpperHalfPoint p{t(rng), cd(x(rng), x(rng))};
    const auto pulled = lh3::testing::pulled_back_ball_metric(p);
    const auto g = lh3::metric_tensor(p);
    const double s = g[0][0];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_NEAR(pulled[a][b] / s, g[a][b] / s, 1e-8);
  }
}

TEST(Models, DistanceAlongVerticalLine) {
  EXPECT_NEAR(lh3::distance({1.0, 0.0}, {std::exp(2.0), 0.0}), 2.0, 1e-14);
  EXPECT_NEAR(lh3::distance({0.7, cd(0.1, 0.2)}, {0.7, cd(0.1, 0.2)}), 0.0, 1e-12);
}

TEST(Models, InnerProductScalesWithHeight) {
  EXPECT_NEAR(lh3::inner({2.0, 0.0}, {2.0, 0.0, 0.0}, {2.0, 0.0, 0.0}), 1.0, 1e-15);
}

}  // namespace
