#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "charts.hpp"
#include "lh3/catalog.hpp"
#include "lh3/expr.hpp"
#include "oracles.hpp"

namespace {

using lh3::cd;
using lh3::Expr;
using lh3::Wirtinger;

// Random expressions over m1, c1 with bounded size; divisions are by
// expressions shifted away from zero on the unit disk.
class ExprGen {
 public:
  explicit ExprGen(unsigned seed) : rng_(seed) {}

  Expr operator()(int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 2);
    switch (pick(rng_)) {
      case 0: return Expr::variable("m1");
      case 1: return Expr::variable("c1");
      case 2: return Expr::constant(cd(coef_(rng_), coef_(rng_)));
      case 3: return (*this)(depth - 1) + (*this)(depth - 1);
      case 4: return (*this)(depth - 1) - (*this)(depth - 1);
      case 5: return (*this)(depth - 1) * (*this)(depth - 1);
      case 6: return (*this)(depth - 1) / (Expr::constant(3.0) + small(depth - 1));
      case 7: return exp(small(depth - 1));
      default: return conj((*this)(depth - 1));
    }
  }

  cd point() {
    std::uniform_real_distribution<double> x(-0.5, 0.5);
    return {x(rng_), x(rng_)};
  }

 private:
  // Expressions of modulus below about one on the sample disk.
  Expr small(int depth) { return Expr::constant(0.2) * (*this)(std::max(depth, 0)); }

  std::mt19937 rng_;
  std::uniform_real_distribution<double> coef_{-1.0, 1.0};
};

cd numeric_d(const Expr& e, cd nu, Wirtinger w) {
  const auto fd = lh3::testing::fd_wirtinger([&](cd z) { return e.eval_at(z); }, nu);
  return w == Wirtinger::D ? fd.d : fd.dbar;
}

double tol(cd value) { return 1e-9 * std::max(1.0, std::abs(value)); }

TEST(ExprProperties, SymbolicDerivativesMatchDifferences) {
  ExprGen gen(1);
  for (int n = 0; n < 200; ++n) {
    const Expr e = gen(3);
    const cd nu = gen.point();
    for (Wirtinger w : {Wirtinger::D, Wirtinger::Dbar}) {
      const cd a = e.diff(w).eval_at(nu);
      EXPECT_NEAR(std::abs(a - numeric_d(e, nu, w)), 0.0, 1e-8 * std::max(1.0, std::abs(a)))
          << e.to_string();
    }
  }
}

TEST(ExprProperties, LinearityProductAndQuotientRules) {
  ExprGen gen(2);
  for (int n = 0; n < 100; ++n) {
    const Expr f = gen(2), g = gen(2);
    const Expr q = Expr::constant(3.0) + Expr::constant(0.2) * g;
    const cd nu = gen.point();
    for (Wirtinger w : {Wirtinger::D, Wirtinger::Dbar}) {
      const cd df = f.diff(w).eval_at(nu), dg = g.diff(w).eval_at(nu);
      const cd fv = f.eval_at(nu), gv = g.eval_at(nu), qv = q.eval_at(nu);
      const cd sum = (f + Expr::constant(2.0) * g).diff(w).eval_at(nu);
      EXPECT_NEAR(std::abs(sum - (df + 2.0 * dg)), 0.0, tol(sum));
      const cd prod = (f * g).diff(w).eval_at(nu);
      EXPECT_NEAR(std::abs(prod - (df * gv + fv * dg)), 0.0, tol(prod));
      const cd quot = (f / q).diff(w).eval_at(nu);
      const cd dq = 0.2 * dg;
      EXPECT_NEAR(std::abs(quot - (df * qv - fv * dq) / (qv * qv)), 0.0, tol(quot));
      EXPECT_NEAR(std::abs(quot - numeric_d(f / q, nu, w)), 0.0, 1e-8 * std::max(1.0, std::abs(quot)));
    }
  }
}

TEST(ExprProperties, MixedPartialsCommute) {
  ExprGen gen(3);
  for (int n = 0; n < 100; ++n) {
    const Expr e = gen(3);
    const cd nu = gen.point();
    const cd a = e.diff(Wirtinger::D).diff(Wirtinger::Dbar).eval_at(nu);
    const cd b = e.diff(Wirtinger::Dbar).diff(Wirtinger::D).eval_at(nu);
    EXPECT_NEAR(std::abs(a - b), 0.0, tol(a)) << e.to_string();
  }
}

TEST(ExprProperties, ConjIsAnInvolutionThroughPrinting) {
  ExprGen gen(4);
  for (int n = 0; n < 100; ++n) {
    const Expr e = gen(3);
    const Expr twice = Expr::parse("conj(conj(" + e.to_string() + "))");
    EXPECT_EQ(twice.to_string(), Expr::parse(e.to_string()).to_string());
    const cd nu = gen.point();
    EXPECT_EQ(twice.eval_at(nu), Expr::parse(e.to_string()).eval_at(nu));
    EXPECT_NEAR(std::abs(conj(e).eval_at(nu) - std::conj(e.eval_at(nu))), 0.0,
                1e-15 * std::max(1.0, std::abs(e.eval_at(nu))));
  }
}

TEST(ExprProperties, SeriesMatchesSymbolicJets) {
  ExprGen gen(5);
  for (int n = 0; n < 50; ++n) {
    const Expr e = gen(3);
    const cd nu = gen.point();
    const lh3::Series s = e.eval_series(nu, 2);
    const cd dd = e.diff(Wirtinger::D).diff(Wirtinger::D).eval_at(nu);
    EXPECT_NEAR(std::abs(s.derivative(2, 0) - dd), 0.0, 1e-10 * std::max(1.0, std::abs(dd)));
  }
}

TEST(CongruenceProperties, SachsHoldsForTwistingCharts) {
  for (const auto& c : lh3::testing::twisting_battery())
    for (cd nu : lh3::testing::sample_points(*c.chart, 5)) {
      const auto jet = lh3::jets(*c.chart, nu);
      for (double r = -3.0; r <= 3.0; r += 1.0) {
        bool focal = false;
        for (double f : lh3::focal_parameters(jet)) focal |= std::abs(f - r) < lh3::kFocalMargin;
        if (focal) continue;
        EXPECT_LE(lh3::sachs_residual(jet, r).max(), 1e-6) << c.name;
      }
    }
}

TEST(CongruenceProperties, TwistVanishesExactlyOnLagrangianCharts) {
  for (const auto& c : lh3::testing::lagrangian_battery(10, 103))
    for (cd nu : lh3::testing::sample_points(*c.chart, 5))
      EXPECT_LE(std::abs(lh3::optical_scalars(*c.chart, nu, 0.1).twist), 1e-9) << c.name;
}

TEST(SurfaceProperties, NormalCongruenceRoundTrip) {
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> a(-0.2, 0.2);
  for (int n = 0; n < 10; ++n) {
    const double b1 = a(rng), b2 = a(rng), b3 = a(rng);
    const lh3::Immersion graph = [=](const lh3::Series& nu) {
      const lh3::Series u = nu.real(), v = nu.imag();
      return lh3::SurfacePatch{1.2 + 0.25 * u + 0.1 * v + b1 * u * v + b2 * exp(u) + b3 * v * v,
                               nu};
    };
    const auto nc = lh3::normal_congruence_of_surface(graph, lh3::Domain::disk(0.0, 0.3));
    for (cd nu : lh3::testing::sample_points(*nc.chart, 7)) {
      const auto p = lh3::point_at(nc.chart->geodesic(nu), nc.r_at(nu));
      EXPECT_NEAR(lh3::distance(p, nc.point(nu)), 0.0, 1e-6);
      EXPECT_LE(std::abs(lh3::optical_scalars(*nc.chart, nu, 0.0).twist), 1e-8);
    }
  }
}

TEST(SurfaceProperties, ParallelFamiliesAreEquidistant) {
  std::mt19937 rng(109);
  std::uniform_real_distribution<double> r0(-1.0, 1.0);
  for (const auto& c : lh3::testing::lagrangian_battery(4, 113)) {
    const lh3::Grid grid(c.chart->domain(), 11);
    const auto [i, j] = grid.nearest_active(c.chart->domain().disk_center);
    const double a = r0(rng), b = r0(rng);
    const auto sa = lh3::reconstruct_surface(*c.chart, lh3::integrate_r(*c.chart, grid, grid.node(i, j), a));
    const auto sb = lh3::reconstruct_surface(*c.chart, lh3::integrate_r(*c.chart, grid, grid.node(i, j), b));
    for (std::size_t k = 0; k < sa.samples.size(); ++k)
      if (sa.samples[k].valid && sb.samples[k].valid) {
        EXPECT_NEAR(lh3::distance(sa.samples[k].point, sb.samples[k].point), std::abs(a - b), 1e-8)
            << c.name;
      }
  }
}

}  // namespace
