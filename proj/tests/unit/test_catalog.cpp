#include <gtest/gtest.h>

#include <cmath>

#include "charts.hpp"
#include "lh3/catalog.hpp"

namespace {

using lh3::AlphaParams;
using lh3::cd;
using lh3::ErrorKind;
using lh3::Grid;
using lh3::testing::graph_chart;

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << lh3::to_string(kind);
  } catch (const lh3::Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

lh3::CatalogChart catalog(const std::string& name,
                          std::map<std::string, double> params = {}) {
  lh3::CatalogRequest req;
  req.name = name;
  req.params = std::move(params);
  return lh3::make_catalog_chart(req);
}

TEST(AlphaChart, IdentityParameters) {
  const auto chart = lh3::alpha_chart({0.0, 1.0});
  for (cd nu : {cd(0.1, 0.2), cd(-0.5, 0.3)})
    EXPECT_NEAR(std::abs(chart->eval(nu).second - nu), 0.0, 1e-15);
}

TEST(AlphaChart, MoebiusParameters) {
  const auto chart = lh3::alpha_chart({0.5, 0.75});
  for (cd nu : {cd(0.1, 0.2), cd(-0.5, 0.3)})
    EXPECT_NEAR(std::abs(chart->eval(nu).second - (0.5 + nu) / (1.0 + 0.5 * nu)), 0.0,
                1e-15);
}

TEST(AlphaChart, TaylorCoefficientsFollowRecursion) {
  const AlphaParams p{cd(0.4, -0.3), 0.6};
  const auto chart = lh3::alpha_chart(p, lh3::Domain::disk(0.0, 0.5));
  const lh3::Series s = chart->expand(0.0, 6).mu2;
  EXPECT_NEAR(std::abs(s.coeff(0, 0) - p.A0), 0.0, 1e-15);
  for (int n = 1; n <= 6; ++n) {
    const cd expected = std::pow(-std::conj(p.A0), n - 1) * p.A1;
    EXPECT_NEAR(std::abs(lh3::alpha_coefficient(p, n) - expected), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.coeff(n, 0) - expected), 0.0, 1e-9) << n;
    EXPECT_NEAR(std::abs(s.coeff(0, n)), 0.0, 1e-15);
  }
}

TEST(AlphaChart, PoleIsExcluded) {
  const AlphaParams p{cd(2.0, 0.0), 1.0};
  const auto pole = lh3::alpha_pole(p);
  ASSERT_TRUE(pole.has_value());
  EXPECT_NEAR(std::abs(*pole + 0.5), 0.0, 1e-15);
  const auto chart = lh3::alpha_chart(p);
  EXPECT_FALSE(chart->domain().contains(*pole));
  EXPECT_FALSE(lh3::alpha_pole({0.0, 1.0}).has_value());
}

TEST(AlphaChart, PoleAtCenterIsRejected) {
  expect_error(ErrorKind::PoleInDomain,
               [] { lh3::alpha_chart({cd(-2.0, 0.0), 1.0}, lh3::Domain::disk(0.5, 0.3)); });
}

TEST(AlphaChart, EverySampleIsAnAlphaPoint) {
  const auto chart = lh3::alpha_chart({cd(0.3, 0.2), 0.5});
  for (cd nu : lh3::testing::sample_points(*chart, 9)) {
    const auto pc = lh3::classify_point(*chart, nu);
    EXPECT_TRUE(pc.lagrangian);
    EXPECT_TRUE(pc.complex_point);
  }
}

TEST(SphereCongruence, UnitCenter) {
  const auto p = lh3::sphere_congruence({1.0, 0.0});
  EXPECT_NEAR(std::abs(p.A0), 0.0, 1e-15);
  EXPECT_NEAR(p.A1, 1.0, 1e-15);
}

TEST(SphereCongruence, RoundTrip) {
  std::mt19937 rng(89);
  std::uniform_real_distribution<double> x(-1.0, 1.0), t(0.3, 2.0);
  for (int n = 0; n < 50; ++n) {
    const AlphaParams p = lh3::sphere_congruence({t(rng), cd(x(rng), x(rng))});
    const AlphaParams q = lh3::sphere_congruence(lh3::sphere_center(p));
    EXPECT_NEAR(std::abs(p.A0 - q.A0), 0.0, 1e-12);
    EXPECT_NEAR(p.A1, q.A1, 1e-12);
  }
}

TEST(SphereCongruence, InvalidCenter) {
  expect_error(ErrorKind::InvalidArgument, [] { lh3::sphere_congruence({-1.0, 0.0}); });
}

TEST(SphereCongruence, SphereEquationAndConcurrence) {
  const lh3::UpperHalfPoint center{0.8, cd(0.2, 0.3)};
  const auto chart = lh3::alpha_chart(lh3::sphere_congruence(center));
  for (cd nu : lh3::testing::sample_points(*chart, 15)) {
    const auto [m1, m2] = chart->eval(nu);
    EXPECT_LE(lh3::sphere_equation_residual(center, m1, m2), 1e-10);
    const auto ca = lh3::closest_approach(chart->geodesic(nu), center);
    EXPECT_LE(ca.distance, 1e-9);
    EXPECT_NEAR(std::abs(lh3::optical_scalars(*chart, nu, ca.r + 0.5).sigma), 0.0, 1e-12);
  }
}

TEST(Horosphere, CommonForwardEndpoint) {
  const auto chart = lh3::horosphere_chart(1.0);
  for (cd nu : lh3::testing::sample_points(*chart, 9)) {
    const auto e = lh3::boundary_endpoints(chart->geodesic(nu));
    EXPECT_TRUE(e.z_plus.approx_equal(1.0, 1e-14));
    const auto pc = lh3::classify_point(*chart, nu);
    EXPECT_TRUE(pc.lagrangian && pc.complex_point);
  }
  expect_error(ErrorKind::InvalidArgument, [] { lh3::horosphere_chart(0.0); });
}

// With the normal along increasing r, the normals of the horosphere chart
// converge to the common endpoint: rho = +1 and both principal curvatures
// are -1 in that orientation (1 for the opposite normal).
TEST(Horosphere, UnitPrincipalCurvatures) {
  const auto c = catalog("horosphere");
  for (cd nu : lh3::testing::sample_points(*c.chart, 7)) {
    const auto s = lh3::optical_scalars(*c.chart, nu, c.reference_r(nu));
    EXPECT_NEAR(std::abs(s.sigma), 0.0, 1e-12);
    const auto [l1, l2] = lh3::principal_curvatures(s);
    EXPECT_NEAR(std::abs(l1), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(l2), 1.0, 1e-12);
  }
}

TEST(TotallyGeodesic, ConstantAndScalars) {
  const AlphaParams p{0.0, -1.0};
  const auto tg = lh3::totally_geodesic_chart(p);
  EXPECT_NEAR(tg.C, 0.0, 1e-15);
  EXPECT_NEAR(lh3::alpha_rho(p, tg.C), 0.0, 1e-15);
  for (cd nu : lh3::testing::sample_points(*tg.chart, 9)) {
    const auto s = lh3::optical_scalars(*tg.chart, nu, lh3::alpha_r(p, tg.C, nu));
    EXPECT_LE(std::abs(s.rho), 1e-8);
    EXPECT_LE(std::abs(s.sigma), 1e-10);
  }
  expect_error(ErrorKind::InvalidArgument, [] { lh3::totally_geodesic_chart({0.0, 1.0}); });
}

TEST(Flatness, FlatAndSphereCharts) {
  const auto flat = lh3::flat_conjugate_chart();
  EXPECT_TRUE(lh3::flatness_test(*flat, Grid(flat->domain(), 11)).flat);
  const auto sphere = graph_chart("m1");
  EXPECT_FALSE(lh3::flatness_test(*sphere, Grid(sphere->domain(), 11)).flat);
}

TEST(Flatness, AllParallelSurfacesAreFlat) {
  const auto flat = lh3::flat_conjugate_chart();
  for (double r : {-1.0, 0.5, 1.5})
    for (cd nu : lh3::testing::sample_points(*flat, 7)) {
      const auto jet = lh3::jets(*flat, nu);
      bool focal = false;
      for (double f : lh3::focal_parameters(jet)) focal |= std::abs(f - r) < 0.05;
      if (focal) continue;
      EXPECT_LE(std::abs(lh3::optical_scalars(jet, r).kappa), 1e-8);
    }
}

TEST(Flatness, TwistingChartIsRejected) {
  const auto chart = graph_chart("0.5i + m1 + 0.1*conj(m1)^2", lh3::testing::small_disk());
  expect_error(ErrorKind::NotLagrangian,
               [&] { lh3::flatness_test(*chart, Grid(chart->domain(), 7)); });
}

TEST(Cmc1, HorosphereAndSphereAreDegenerateCmc1) {
  for (const auto& chart : {lh3::ChartPtr(lh3::horosphere_chart(1.0)),
                            lh3::ChartPtr(graph_chart("m1"))}) {
    const auto rep = lh3::cmc1_test(*chart, Grid(chart->domain(), 11));
    EXPECT_TRUE(rep.cmc1);
    EXPECT_TRUE(rep.degenerate);
  }
}

TEST(Cmc1, FlatChartHasVanishingRho0) {
  const auto flat = lh3::flat_conjugate_chart();
  expect_error(ErrorKind::NonPositiveRho0,
               [&] { lh3::cmc1_test(*flat, Grid(flat->domain(), 11)); });
}

TEST(Cmc1, ClosedFormRGivesUnitDivergence) {
  const auto chart = lh3::cmc1_chart();
  const auto rep = lh3::cmc1_test(*chart, Grid(chart->domain(), 21));
  EXPECT_TRUE(rep.cmc1);
  EXPECT_FALSE(rep.degenerate);
  EXPECT_LE(rep.max_rho_residual, 1e-7);
  EXPECT_LE(rep.max_condition_residual, 1e-7);
}

TEST(Cmc1, NonCmcPotentialFailsTheCondition) {
  const auto chart = lh3::potential_chart(
      lh3::Expr::parse("m1*c1 + 1.5*(m1 + c1) + 0.1*(m1*c1)^2 + 0.05*(m1^3 + c1^3)"),
      lh3::testing::small_disk());
  const auto rep = lh3::cmc1_test(*chart, Grid(chart->domain(), 11));
  EXPECT_FALSE(rep.cmc1);
  EXPECT_GT(rep.max_dbar_sigma0, 1e-3);
  EXPECT_GT(rep.max_condition_residual, 1e-3);
}

TEST(PotentialChart, ShearAndDivergenceFromPotential) {
  const lh3::Expr psi = lh3::Expr::parse("m1*c1 + 1.2*(m1 + c1) + 0.2*(m1*c1)^2");
  const auto chart = lh3::potential_chart(psi, lh3::testing::small_disk());
  const cd nu(0.1, 0.05);
  const auto g = lh3::graph_data(*chart, nu);
  const lh3::Series e = exp(psi.eval_series(nu, 4));
  const cd rho0 = psi.eval_series(nu, 4).derivative(1, 1);
  const cd sigma0 = e.derivative(2, 0) / e.value();
  EXPECT_NEAR(std::abs(g.rho0.value() - rho0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g.sigma0.value() - sigma0), 0.0, 1e-12);
}

TEST(Codazzi, CatalogGraphs) {
  for (const auto& chart : {lh3::ChartPtr(lh3::cmc1_chart()),
                            lh3::ChartPtr(lh3::flat_conjugate_chart())})
    for (cd nu : lh3::testing::sample_points(*chart, 7))
      EXPECT_LE(lh3::codazzi_residual(lh3::graph_data(*chart, nu)), 1e-8);
}

TEST(CatalogRegistry, AllNamesResolve) {
  for (const auto& name : lh3::catalog_names()) {
    if (name == "custom-expression") continue;
    lh3::CatalogRequest req;
    req.name = name;
    if (name == "rotational") req.profile = "cosh";
    const auto c = lh3::make_catalog_chart(req);
    ASSERT_TRUE(c.chart) << name;
    EXPECT_FALSE(c.description.empty());
  }
  lh3::CatalogRequest bad;
  bad.name = "no-such-chart";
  expect_error(ErrorKind::InvalidArgument, [&] { lh3::make_catalog_chart(bad); });
}

TEST(CatalogRegistry, CustomExpression) {
  lh3::CatalogRequest req;
  req.name = "custom-expression";
  req.expr = "conj(m1)";
  const auto c = lh3::make_catalog_chart(req);
  EXPECT_NEAR(std::abs(c.chart->eval(cd(0.2, 0.1)).second - cd(0.2, -0.1)), 0.0, 1e-15);
}

TEST(RotationalProfile, NamedAndCustom) {
  EXPECT_NEAR(std::abs(lh3::rotational_profile("cosh").eval({{"s", cd(0.0)}}) - 1.0), 0.0,
              1e-15);
  EXPECT_NEAR(std::abs(lh3::rotational_profile("1 + s").eval({{"s", cd(2.0)}}) - 3.0), 0.0,
              1e-15);
}

}  // namespace
