#include <gtest/gtest.h>

#include <cmath>

#include "charts.hpp"
#include "lh3/catalog.hpp"
#include "lh3/congruence.hpp"
#include "oracles.hpp"

namespace {

using lh3::cd;
using lh3::ErrorKind;
using lh3::testing::graph_chart;

bool near_focal(const lh3::Jet2& jet, double r) {
  for (double f : lh3::focal_parameters(jet))
    if (std::abs(f - r) < lh3::kFocalMargin) return true;
  return false;
}

// Stays away from nu = 0, where graphs like m1 and conj(m1) hit the vertical
// line outside the holomorphic chart.
lh3::Domain off_axis_disk() { return lh3::Domain::disk(cd(0.4, 0.3), 0.25); }

TEST(Jets, ConjugateLinearChart) {
  const auto chart = graph_chart("conj(m1)");
  const auto j = lh3::jets(*chart, cd(0.2, 0.1));
  EXPECT_NEAR(std::abs(j.mu2.d), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j.mu2.db - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j.mu1.d - 1.0), 0.0, 1e-15);
}

TEST(Jets, HolomorphicMonomial) {
  const auto chart = graph_chart("m1^2");
  const cd nu(0.3, -0.4);
  const auto j = lh3::jets(*chart, nu);
  EXPECT_NEAR(std::abs(j.mu2.d - 2.0 * nu), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j.mu2.db), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j.mu2.dd - 2.0), 0.0, 1e-15);
}

TEST(Jets, NumericJetsMatchExactOnMoebiusChart) {
  const lh3::ChartPtr chart = graph_chart("(0.5 + m1)/(1 + 0.5*m1)");
  const auto numeric = lh3::testing::numeric_twin(chart);
  for (cd nu : lh3::testing::sample_points(*chart, 9)) {
    const auto a = lh3::jets(*chart, nu), b = lh3::jets(*numeric, nu);
    const cd pairs[][2] = {{a.mu2.d, b.mu2.d},     {a.mu2.db, b.mu2.db},
                           {a.mu2.dd, b.mu2.dd},   {a.mu2.ddb, b.mu2.ddb},
                           {a.mu2.dbdb, b.mu2.dbdb}, {a.mu1.d, b.mu1.d}};
    for (const auto& p : pairs) EXPECT_NEAR(std::abs(p[0] - p[1]), 0.0, 1e-8);
  }
}

TEST(Jets, OutsideDomainIsRejected) {
  const auto chart = graph_chart("m1");
  try {
    lh3::jets(*chart, cd(2.0, 0.0));
    FAIL();
  } catch (const lh3::Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(Jets, ConjugationSymmetry) {
  const auto chart = graph_chart("conj(m1)^2 + 0.3*m1*conj(m1) + 1");
  const cd nu(0.1, 0.25);
  const auto j = chart->expand(nu, 3);
  const lh3::Series c = j.mu2.conj();
  EXPECT_EQ(c.derivative(0, 1), std::conj(j.mu2.derivative(1, 0)));
  EXPECT_EQ(c.derivative(1, 0), std::conj(j.mu2.derivative(0, 1)));
}

TEST(JInvariants, Antisymmetric) {
  const auto chart = graph_chart("0.5 + m1 + 0.2*conj(m1)^2");
  const auto J = lh3::j_invariants(lh3::jets(*chart, cd(0.1, 0.2)));
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) EXPECT_NEAR(std::abs(J(k, l) + J(l, k)), 0.0, 1e-15);
}

TEST(JInvariants, HolomorphicChartHasVanishingJ12) {
  const auto chart = graph_chart("exp(m1) + m1^3");
  const auto J = lh3::j_invariants(lh3::jets(*chart, cd(0.2, -0.3)));
  EXPECT_NEAR(std::abs(J(lh3::J1, lh3::J2)), 0.0, 1e-15);
}

TEST(JInvariants, J22bIsReal) {
  for (const char* e : {"conj(m1)", "0.5i + m1 + 0.1*conj(m1)^2", "exp(conj(m1)) + m1*conj(m1)"}) {
    const auto chart = graph_chart(e);
    const auto J = lh3::j_invariants(lh3::jets(*chart, cd(0.15, 0.35)));
    EXPECT_NEAR(J(lh3::J2, lh3::J2b).imag(), 0.0, 1e-12) << e;
  }
}

TEST(OpticalScalars, SphereChartIsShearFree) {
  const auto chart = lh3::alpha_chart(lh3::sphere_congruence({1.0, cd(0.2, -0.1)}));
  for (cd nu : lh3::testing::sample_points(*chart, 7))
    for (double r : {-2.0, -0.5, 0.7, 2.5}) {
      if (near_focal(lh3::jets(*chart, nu), r)) continue;
      EXPECT_NEAR(std::abs(lh3::optical_scalars(*chart, nu, r).sigma), 0.0, 1e-12);
    }
}

TEST(OpticalScalars, TotallyGeodesicChartHasZeroDivergence) {
  const lh3::AlphaParams p{0.0, -1.0};
  const auto tg = lh3::totally_geodesic_chart(p);
  EXPECT_NEAR(tg.C, 0.0, 1e-15);
  for (cd nu : lh3::testing::sample_points(*tg.chart, 7)) {
    const double r = lh3::alpha_r(p, tg.C, nu);
    const auto s = lh3::optical_scalars(*tg.chart, nu, r);
    EXPECT_NEAR(std::abs(s.rho), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.sigma), 0.0, 1e-12);
  }
}

TEST(OpticalScalars, SachsEquationsOnLagrangianCharts) {
  for (const auto& c : lh3::testing::lagrangian_battery(14, 31)) {
    double worst = 0.0;
    for (cd nu : lh3::testing::sample_points(*c.chart, 5)) {
      const auto jet = lh3::jets(*c.chart, nu);
      for (double r = -3.0; r <= 3.0; r += 0.5) {
        if (near_focal(jet, r)) continue;
        worst = std::max(worst, lh3::sachs_residual(jet, r).max());
      }
    }
    EXPECT_LE(worst, 1e-6) << c.name;
  }
}

// The twist itself decays along the lines; the symplectic area element
// twist * Delta does not.
TEST(OpticalScalars, TwistAreaIsIndependentOfR) {
  const auto chart = graph_chart("0.5i + m1 + 0.1*conj(m1)^2");
  for (cd nu : lh3::testing::sample_points(*chart, 5)) {
    const auto jet = lh3::jets(*chart, nu);
    const auto s0 = lh3::optical_scalars(jet, 0.0);
    const double a0 = s0.twist * s0.delta;
    for (double r : {-3.0, -1.0, 1.0, 3.0}) {
      if (near_focal(jet, r)) continue;
      const auto s = lh3::optical_scalars(jet, r);
      EXPECT_NEAR(s.twist * s.delta, a0, 1e-10 * std::max(1.0, std::abs(s.delta)));
    }
  }
}

TEST(OpticalScalars, SymplecticPullbackMatchesTwist) {
  for (const char* e : {"0.5i + m1 + 0.1*conj(m1)^2", "1 + 0.3*m1 + 0.3i*conj(m1)", "conj(m1)"}) {
    const auto chart = graph_chart(e, off_axis_disk());
    for (cd nu : lh3::testing::sample_points(*chart, 5)) {
      const auto jet = lh3::jets(*chart, nu);
      const auto s = lh3::optical_scalars(jet, 0.0);
      EXPECT_NEAR(lh3::pullback_omega_uv(jet), -s.delta * s.twist / 4.0,
                  1e-8 * std::max(1.0, std::abs(s.delta))) << e;
    }
  }
}

TEST(OpticalScalars, DegenerateFrameAtFocalPoint) {
  const auto chart = graph_chart("conj(m1)");
  const cd nu(0.5, 0.0);
  try {
    lh3::optical_scalars(*chart, nu, std::log(std::abs(nu)));
    FAIL();
  } catch (const lh3::Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateFrame);
  }
}

TEST(OpticalScalars, VerticalLineIsChartSingular) {
  for (const char* e : {"m1", "conj(m1)"}) {
    try {
      lh3::optical_scalars(*graph_chart(e), 0.0, 0.5);
      FAIL() << e;
    } catch (const lh3::Error& err) {
      EXPECT_EQ(err.kind(), ErrorKind::ChartSingular);
    }
  }
}

TEST(XiEtaScalars, AgreeOnSphereAndFlatCharts) {
  for (const char* e : {"m1", "conj(m1)"}) {
    const auto chart = graph_chart(e, off_axis_disk());
    for (cd nu : lh3::testing::sample_points(*chart, 7))
      for (double r : {-1.5, 0.4, 2.0}) {
        if (near_focal(lh3::jets(*chart, nu), r)) continue;
        const auto a = lh3::optical_scalars(*chart, nu, r);
        const auto b = lh3::optical_scalars_xieta(*chart, nu, r);
        const double s = std::max(1.0, std::abs(a.rho));
        EXPECT_NEAR(std::abs(a.rho - b.rho), 0.0, 1e-8 * s) << e;
        EXPECT_NEAR(std::abs(a.sigma) - std::abs(b.sigma), 0.0, 1e-8 * s) << e;
      }
  }
}

TEST(AdaptedFrame, DeltaIsRealAndMatchesHolomorphicForm) {
  for (const char* e : {"m1", "conj(m1)", "0.5i + m1 + 0.1*conj(m1)^2", "0.5 + m1 + 0.2*conj(m1)^2"}) {
    const auto chart = graph_chart(e, off_axis_disk());
    for (cd nu : lh3::testing::sample_points(*chart, 5)) {
      const auto f = lh3::adapted_frame(*chart, nu, 0.3);
      const auto s = lh3::optical_scalars(*chart, nu, 0.3);
      EXPECT_LE(std::abs(f.delta.imag()), 1e-10 * std::max(1.0, std::abs(f.delta)));
      EXPECT_NEAR(f.delta.real(), s.delta, 1e-8 * std::abs(s.delta)) << e;
      EXPECT_TRUE(std::isfinite(std::abs(f.a)) && std::isfinite(std::abs(f.b)));
    }
  }
}

TEST(ClassifyPoint, SphereChartIsAnAlphaSurface) {
  const auto pc = lh3::classify_point(*graph_chart("m1"), cd(0.2, 0.1));
  EXPECT_TRUE(pc.lagrangian);
  EXPECT_TRUE(pc.complex_point);
  EXPECT_EQ(pc.rank, 2);
}

TEST(ClassifyPoint, FlatChartIsLagrangianNotComplex) {
  const auto pc = lh3::classify_point(*graph_chart("conj(m1)"), cd(0.2, 0.1));
  EXPECT_TRUE(pc.lagrangian);
  EXPECT_FALSE(pc.complex_point);
  EXPECT_EQ(pc.rank, 2);
  EXPECT_NEAR(pc.j12, 1.0, 1e-15);
}

TEST(ClassifyPoint, ConstantChart) {
  const auto pc = lh3::classify_point(*graph_chart("0.4 + 0.2i"), cd(0.2, 0.1));
  EXPECT_TRUE(pc.lagrangian);
  EXPECT_EQ(pc.rank, 2);
}

TEST(ClassifyPoint, TwistingChart) {
  const auto pc = lh3::classify_point(*graph_chart("0.5i + m1 + 0.1*conj(m1)^2"), cd(0.3, 0.2));
  EXPECT_FALSE(pc.lagrangian);
  EXPECT_GT(std::abs(pc.twist), 1e-6);
}

TEST(ClassifyPoint, RankOneChart) {
  lh3::CatalogRequest req;
  req.name = "horo-canal";
  const auto c = lh3::make_catalog_chart(req);
  const auto pc = lh3::classify_point(*c.chart, c.chart->domain().lower + cd(0.4, 0.8));
  EXPECT_EQ(pc.rank, 1);
  EXPECT_TRUE(pc.lagrangian);
}

TEST(FocalParameters, FlatChartFocusesAtLogModulus) {
  const auto chart = graph_chart("conj(m1)");
  const cd nu(0.3, 0.4);
  const auto f = lh3::focal_parameters(lh3::jets(*chart, nu));
  ASSERT_FALSE(f.empty());
  double best = 1e9;
  for (double r : f) best = std::min(best, std::abs(r - std::log(std::abs(nu))));
  EXPECT_NEAR(best, 0.0, 1e-8);
}

TEST(XiEtaJet, RoundTrip) {
  const auto chart = graph_chart("(0.5 + m1)/(1 + 0.5*m1) + 0.1*conj(m1)");
  const auto jet = chart->expand(cd(0.1, -0.2), 4);
  const auto back = lh3::to_mu(lh3::to_xieta(jet));
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b)
      EXPECT_NEAR(std::abs(back.mu2.coeff(a, b) - jet.mu2.coeff(a, b)), 0.0, 1e-12);
}

}  // namespace
