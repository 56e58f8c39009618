#include <random>
#include <gtest/gtest.h>

#include <complex>

#include "lh3/catalog.hpp"
#include "lh3/errors.hpp"
#include "lh3/expr.hpp"
#include "oracles.hpp"

namespace {

using lh3::cd;
using lh3::Error;
using lh3::ErrorKind;
using lh3::Expr;
using lh3::ParseError;
using lh3::Wirtinger;

cd at(const std::string& text, cd m1) { return Expr::parse(text).eval_at(m1); }

TEST(ExprParse, VariableNode) {
  const Expr e = Expr::parse("m1");
  EXPECT_EQ(e.op(), lh3::ExprOp::Var);
  EXPECT_EQ(e.name(), "m1");
}

TEST(ExprParse, MoebiusChartEvaluatesToCenterValue) {
  EXPECT_NEAR(std::abs(at("(0.5 + m1)/(1 + 0.5*m1)", 0.0) - 0.5), 0.0, 1e-15);
}

TEST(ExprParse, MoebiusChartMatchesAlphaChart) {
  const Expr alpha = lh3::alpha_expr({cd(0.5), 0.75});
  for (cd m1 : {cd(0.1, 0.2), cd(-0.3, 0.4), cd(0.6, -0.1)})
    EXPECT_NEAR(std::abs(at("(0.5 + m1)/(1 + 0.5*m1)", m1) - alpha.eval_at(m1)),
                0.0, 1e-14);
}

TEST(ExprParse, UnbalancedParenthesisReportsOffset) {
  try {
    Expr::parse("conj(m1");
    FAIL() << "expected a syntax error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
    EXPECT_EQ(e.offset(), 8u);
  }
}

TEST(ExprParse, TrailingOperatorReportsOffset) {
  try {
    Expr::parse("m1+");
    FAIL() << "expected a syntax error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(ExprParse, UnknownIdentifier) {
  try {
    Expr::parse("m1 + zeta");
    FAIL() << "expected an unknown identifier";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownIdentifier);
    EXPECT_EQ(e.offset(), 6u);
  }
}

TEST(ExprParse, ExtraVariablesAreAccepted) {
  const Expr e = Expr::parse("1 + s^2", {"s"});
  EXPECT_NEAR(std::abs(e.eval({{"s", cd(2.0)}}) - 5.0), 0.0, 1e-15);
}

TEST(ExprParse, PowerBindsTighterThanUnaryMinus) {
  EXPECT_NEAR(std::abs(at("-m1^2", 3.0) + 9.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(at("2*3+4", 0.0) - 10.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(at("m1^(-2)", 2.0) - 0.25), 0.0, 1e-15);
}

TEST(ExprParse, ImaginaryLiterals) {
  EXPECT_EQ(at("2i", 0.0), cd(0.0, 2.0));
  EXPECT_EQ(at("1 + i", 0.0), cd(1.0, 1.0));
  EXPECT_EQ(at("1.5e-3", 0.0), cd(1.5e-3, 0.0));
}

TEST(ExprEval, ModulusSquared) {
  EXPECT_NEAR(std::abs(at("m1*conj(m1)", cd(3.0, 4.0)) - 25.0), 0.0, 1e-13);
}

TEST(ExprEval, ExpOfLogIsIdentity) {
  EXPECT_NEAR(std::abs(at("exp(ln(m1))", 2.0) - 2.0), 0.0, 1e-15);
}

TEST(ExprEval, AlphaChartAtOriginIsA0) {
  const cd A0(0.3, -0.2);
  EXPECT_NEAR(std::abs(lh3::alpha_expr({A0, 0.6}).eval_at(0.0) - A0), 0.0, 1e-15);
}

TEST(ExprEval, DivisionByZeroAndLogOfZero) {
  try {
    at("1/m1", 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
  }
  try {
    at("ln(m1)", 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
}

// c1, u and v are derived from an m1 binding; without one they stay unbound.
TEST(ExprEval, UnboundVariable) {
  try {
    Expr::parse("m1 + c1").eval({{"u", cd(1.0)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownIdentifier);
  }
}

TEST(ExprEval, LogUsesPrincipalBranch) {
  const cd v = at("ln(m1)", cd(-1.0, 0.0));
  EXPECT_NEAR(v.imag(), M_PI, 1e-15);
}

TEST(ExprDiff, WirtingerIndependence) {
  const Expr e = Expr::parse("conj(m1)");
  EXPECT_NEAR(std::abs(e.diff(Wirtinger::D).eval_at(0.3)), 0.0, 0.0);
  EXPECT_NEAR(std::abs(e.diff(Wirtinger::Dbar).eval_at(0.3) - 1.0), 0.0, 0.0);
}

TEST(ExprDiff, ConjugateSwapsDerivativeType) {
  const Expr f = Expr::parse("m1^2 + 0.3*c1*m1 + exp(m1)");
  const Expr g = conj(f);
  const cd nu(0.2, -0.4);
  EXPECT_NEAR(std::abs(g.diff(Wirtinger::D).eval_at(nu) -
                       std::conj(f.diff(Wirtinger::Dbar).eval_at(nu))),
              0.0, 1e-14);
  EXPECT_NEAR(std::abs(g.diff(Wirtinger::Dbar).eval_at(nu) -
                       std::conj(f.diff(Wirtinger::D).eval_at(nu))),
              0.0, 1e-14);
}

TEST(ExprDiff, MoebiusDerivativeMatchesNumericAtRandomPoints) {
  const Expr e = Expr::parse("(0.5 + m1)/(1 + 0.5*m1)");
  const Expr de = e.diff(Wirtinger::D);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> x(-0.8, 0.8);
  for (int n = 0; n < 50; ++n) {
    const cd nu(x(rng), x(rng));
    const auto fd = lh3::testing::fd_wirtinger([&](cd w) { return e.eval_at(w); }, nu);
    EXPECT_NEAR(std::abs(de.eval_at(nu) - fd.d), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(fd.dbar), 0.0, 1e-9);
  }
}

TEST(ExprDiff, RealCoordinateDerivatives) {
  const Expr e = Expr::parse("u^2 + 3*v");
  const cd nu(0.5, 0.25);
  EXPECT_NEAR(std::abs(e.diff_u().eval_at(nu) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.diff_v().eval_at(nu) - 3.0), 0.0, 1e-15);
}

TEST(ExprSeries, MatchesSymbolicDerivatives) {
  const Expr e = Expr::parse("exp(m1*c1) / (1 + 0.5*m1) + ln(2 + c1)");
  const cd nu(0.1, 0.2);
  const lh3::Series s = e.eval_series(nu, 3);
  EXPECT_NEAR(std::abs(s.derivative(1, 0) - e.diff(Wirtinger::D).eval_at(nu)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(s.derivative(1, 1) -
                       e.diff(Wirtinger::D).diff(Wirtinger::Dbar).eval_at(nu)),
              0.0, 1e-13);
}

TEST(ExprPrint, RoundTripPreservesValues) {
  const Expr e = Expr::parse("conj(conj(m1)) + 2.5*c1^3 - exp(0.1i*m1)/(1+m1)");
  const Expr back = Expr::parse(e.to_string());
  for (cd nu : {cd(0.1, 0.2), cd(-0.5, 0.3)})
    EXPECT_EQ(e.eval_at(nu), back.eval_at(nu));
}

TEST(ExprPrint, ConjIsAnInvolution) {
  const Expr e = Expr::parse("conj(conj(m1 + exp(c1)))");
  EXPECT_EQ(e.to_string(), Expr::parse("m1 + exp(c1)").to_string());
}

TEST(ExprVariables, CollectsNames) {
  const auto vars = Expr::parse("m1 + conj(m1) * u").variables();
  EXPECT_TRUE(vars.count("m1"));
  EXPECT_TRUE(vars.count("u"));
}

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(lh3::format_double(x)), x);
  EXPECT_EQ(lh3::format_double(0.0), "0");
}

}  // namespace
