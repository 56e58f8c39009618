#include "lh3/congruence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace lh3 {

namespace {

constexpr cd kI(0.0, 1.0);

ComponentJet from_real_partials(cd f, cd fu, cd fv, cd fuu, cd fuv, cd fvv) {
  ComponentJet j;
  j.f = f;
  j.d = 0.5 * (fu - kI * fv);
  j.db = 0.5 * (fu + kI * fv);
  j.dd = 0.25 * (fuu - 2.0 * kI * fuv - fvv);
  j.ddb = 0.25 * (fuu + fvv);
  j.dbdb = 0.25 * (fuu + 2.0 * kI * fuv - fvv);
  return j;
}

// The holomorphic chart misses lines whose forward endpoint is at infinity
// and lines on the reflected diagonal; the r-origin runs off to infinity as
// either is approached.
void require_chart_line(cd mu1, cd mu2) {
  if (std::abs(mu2) <= kDiagonalEpsilon)
    throw Error(ErrorKind::ChartSingular, "mu2 = 0: forward endpoint at infinity");
  if (std::abs(1.0 + std::conj(mu1) * mu2) <= kDiagonalEpsilon)
    throw Error(ErrorKind::ChartSingular, "line on the reflected diagonal");
}

OpticalScalars to_scalars(const OpticalFormulas<cd>& f) {
  if (std::abs(f.delta) <= kFrameEpsilon)
    throw Error(ErrorKind::DegenerateFrame,
                "adapted frame degenerates (Delta = 0)");
  OpticalScalars s;
  s.rho = f.rho;
  s.sigma = f.sigma;
  s.twist = f.rho.imag();
  s.delta = f.delta.real();
  s.delta_imag = f.delta.imag();
  s.kappa = f.kappa.real();
  return s;
}

}  // namespace

Series ComponentJet::series() const {
  Series s(f, 2);
  s.coeff(1, 0) = d;
  s.coeff(0, 1) = db;
  s.coeff(2, 0) = 0.5 * dd;
  s.coeff(1, 1) = ddb;
  s.coeff(0, 2) = 0.5 * dbdb;
  return s;
}

ComponentJet ComponentJet::from_series(const Series& s) {
  ComponentJet j;
  j.f = s.value();
  if (s.order() >= 1) {
    j.d = s.derivative(1, 0);
    j.db = s.derivative(0, 1);
  }
  if (s.order() >= 2) {
    j.dd = s.derivative(2, 0);
    j.ddb = s.derivative(1, 1);
    j.dbdb = s.derivative(0, 2);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Charts

Jet2 CongruenceChart::jet2(cd nu) const {
  const ChartJet e = expand(nu, 2);
  Jet2 j;
  j.nu = nu;
  j.mu1 = ComponentJet::from_series(e.mu1);
  j.mu2 = ComponentJet::from_series(e.mu2);
  return j;
}

std::pair<cd, cd> CongruenceChart::eval(cd nu) const {
  const ChartJet e = expand(nu, 0);
  return {e.mu1.value(), e.mu2.value()};
}

OrientedGeodesic CongruenceChart::geodesic(cd nu) const {
  const auto [m1, m2] = eval(nu);
  return OrientedGeodesic(m1, m2);
}

void CongruenceChart::require_order(int order) const {
  if (order < 0 || order > max_order())
    throw Error(ErrorKind::InsufficientOrder,
                "chart '" + name_ + "' provides jets up to order " +
                    std::to_string(max_order()) + ", requested " +
                    std::to_string(order));
}

ExpressionChart::ExpressionChart(Expr mu1, Expr mu2, Domain domain,
                                 std::string name)
    : CongruenceChart(std::move(domain), std::move(name)),
      mu1_(std::move(mu1)),
      mu2_(std::move(mu2)),
      j1_(differentiate(mu1_)),
      j2_(differentiate(mu2_)) {}

std::shared_ptr<ExpressionChart> ExpressionChart::graph(const Expr& mu2,
                                                        Domain domain,
                                                        const std::string& name) {
  return std::make_shared<ExpressionChart>(Expr::variable("m1"), mu2,
                                           std::move(domain), name);
}

bool ExpressionChart::is_graph() const {
  return mu1_.op() == ExprOp::Var && mu1_.name() == "m1";
}

ExpressionChart::SymbolicJet ExpressionChart::differentiate(const Expr& e) {
  SymbolicJet j;
  j.f = e;
  j.d = e.diff(Wirtinger::D);
  j.db = e.diff(Wirtinger::Dbar);
  j.dd = j.d.diff(Wirtinger::D);
  j.ddb = j.d.diff(Wirtinger::Dbar);
  j.dbdb = j.db.diff(Wirtinger::Dbar);
  return j;
}

ComponentJet ExpressionChart::SymbolicJet::eval(cd nu) const {
  ComponentJet j;
  j.f = f.eval_at(nu);
  j.d = d.eval_at(nu);
  j.db = db.eval_at(nu);
  j.dd = dd.eval_at(nu);
  j.ddb = ddb.eval_at(nu);
  j.dbdb = dbdb.eval_at(nu);
  return j;
}

ChartJet ExpressionChart::expand(cd nu, int order) const {
  require_order(order);
  return {mu1_.eval_series(nu, order), mu2_.eval_series(nu, order)};
}

Jet2 ExpressionChart::jet2(cd nu) const {
  Jet2 j;
  j.nu = nu;
  j.mu1 = j1_.eval(nu);
  j.mu2 = j2_.eval(nu);
  return j;
}

ChartJet FunctionChart::expand(cd nu, int order) const {
  require_order(order);
  ChartJet j = fn_(Series::variable(nu, order));
  return {j.mu1.truncated(order), j.mu2.truncated(order)};
}

ChartJet NumericChart::expand(cd nu, int order) const {
  require_order(order);
  const Jet2 j = jet2(nu);
  const ChartJet s = j.series();
  return {s.mu1.truncated(order), s.mu2.truncated(order)};
}

Jet2 NumericChart::jet2(cd nu) const {
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(1.0, std::abs(nu));
  const double h1 = std::cbrt(eps) * scale;
  const double h2 = std::pow(eps, 1.0 / 6.0) * scale;

  using Pair = std::array<cd, 2>;
  auto f = [&](double du, double dv) -> Pair {
    const auto [a, b] = fn_(nu + cd(du, dv));
    return {a, b};
  };
  const Pair f0 = f(0.0, 0.0);

  std::array<cd, 2> fu, fv, fuu, fvv, fuv;
  auto first = [&](double h, bool along_v) {
    const Pair p = along_v ? f(0.0, h) : f(h, 0.0);
    const Pair m = along_v ? f(0.0, -h) : f(-h, 0.0);
    return Pair{(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)};
  };
  auto second = [&](double h, bool along_v) {
    const Pair p = along_v ? f(0.0, h) : f(h, 0.0);
    const Pair m = along_v ? f(0.0, -h) : f(-h, 0.0);
    return Pair{(p[0] - 2.0 * f0[0] + m[0]) / (h * h),
                (p[1] - 2.0 * f0[1] + m[1]) / (h * h)};
  };
  auto mixed = [&](double h) {
    const Pair pp = f(h, h), pm = f(h, -h), mp = f(-h, h), mm = f(-h, -h);
    return Pair{(pp[0] - pm[0] - mp[0] + mm[0]) / (4.0 * h * h),
                (pp[1] - pm[1] - mp[1] + mm[1]) / (4.0 * h * h)};
  };
  auto richardson = [](const Pair& fine, const Pair& coarse) {
    return Pair{(4.0 * fine[0] - coarse[0]) / 3.0,
                (4.0 * fine[1] - coarse[1]) / 3.0};
  };
  fu = richardson(first(h1, false), first(2.0 * h1, false));
  fv = richardson(first(h1, true), first(2.0 * h1, true));
  fuu = richardson(second(h2, false), second(2.0 * h2, false));
  fvv = richardson(second(h2, true), second(2.0 * h2, true));
  fuv = richardson(mixed(h2), mixed(2.0 * h2));

  Jet2 j;
  j.nu = nu;
  j.mu1 = from_real_partials(f0[0], fu[0], fv[0], fuu[0], fuv[0], fvv[0]);
  j.mu2 = from_real_partials(f0[1], fu[1], fv[1], fuu[1], fuv[1], fvv[1]);
  return j;
}

Jet2 jets(const CongruenceChart& chart, cd nu) {
  double margin = 0.0;
  if (!chart.exact_jets())
    margin = 2.0 * std::cbrt(std::numeric_limits<double>::epsilon()) *
             std::max(1.0, std::abs(nu));
  if (!chart.domain().contains(nu, -margin))
    throw Error(ErrorKind::OutOfDomain,
                "point " + format_complex(nu) + " outside the domain of chart '" +
                    chart.name() + "'");
  return chart.jet2(nu);
}

JInvariants<cd> j_invariants(const Jet2& jet) {
  return j_invariants<cd>(jet.mu1.d, jet.mu1.db, jet.mu2.d, jet.mu2.db);
}

// ---------------------------------------------------------------------------
// Optical scalars

OpticalScalars optical_scalars(const Jet2& jet, double r) {
  require_chart_line(jet.mu1.f, jet.mu2.f);
  const auto J = j_invariants(jet);
  return to_scalars(optical_formulas(jet.mu1.f, jet.mu2.f, J, r));
}

OpticalScalars optical_scalars(const CongruenceChart& chart, cd nu, double r) {
  return optical_scalars(jets(chart, nu), r);
}

OpticalFormulas<Series> optical_series(const ChartJet& jet, const Series& r) {
  const auto J = j_invariants<Series>(jet.mu1.d(), jet.mu1.dbar(),
                                      jet.mu2.d(), jet.mu2.dbar());
  return optical_formulas(jet.mu1, jet.mu2, J, r);
}

XiEtaJet to_xieta(const ChartJet& jet) {
  require_chart_line(jet.mu1.value(), jet.mu2.value());
  return {xi_of(jet.mu1, jet.mu2), eta_of(jet.mu1, jet.mu2)};
}

ChartJet to_mu(const XiEtaJet& jet) {
  const Series inv_xib = 1.0 / jet.xi.conj();
  const Series z_minus = jet.eta - inv_xib;
  const Series z_plus = jet.eta + inv_xib;
  return {-z_minus, 1.0 / z_plus.conj()};
}

namespace {

// First-order data of the (xi, eta) chart shared by the frame and the
// optical scalars.
struct XiEtaFirstOrder {
  cd xi, dxi, dbxi;
  cd deta, dbeta, detab, dbetab;
  cd dlnxi, dblnxi, dlnxib, dblnxib;
  cd dpF, dmF, delta;
};

XiEtaFirstOrder xieta_first_order(const XiEtaJet& jet, double r) {
  if (jet.xi.order() < 1 || jet.eta.order() < 1)
    throw Error(ErrorKind::InsufficientOrder,
                "(xi, eta) formulas need first derivatives");
  XiEtaFirstOrder q;
  q.xi = jet.xi.value();
  q.dxi = jet.xi.derivative(1, 0);
  q.dbxi = jet.xi.derivative(0, 1);
  q.deta = jet.eta.derivative(1, 0);
  q.dbeta = jet.eta.derivative(0, 1);
  q.detab = std::conj(q.dbeta);
  q.dbetab = std::conj(q.deta);
  const cd xib = std::conj(q.xi);
  q.dlnxi = q.dxi / q.xi;
  q.dblnxi = q.dbxi / q.xi;
  q.dlnxib = std::conj(q.dbxi) / xib;
  q.dblnxib = std::conj(q.dxi) / xib;
  const double er = std::exp(r), emr = std::exp(-r);
  q.dpF = q.xi * er * q.detab - xib * emr * q.deta - er * q.dlnxi -
          emr * q.dlnxib;
  q.dmF = q.xi * er * q.dbetab - xib * emr * q.dbeta - er * q.dblnxi -
          emr * q.dblnxib;
  q.delta = q.dpF * std::conj(q.dpF) - q.dmF * std::conj(q.dmF);
  if (std::abs(q.delta) <= kFrameEpsilon)
    throw Error(ErrorKind::DegenerateFrame,
                "adapted frame degenerates (Delta = 0)");
  return q;
}

}  // namespace

OpticalScalars optical_scalars_xieta(const XiEtaJet& jet, double r) {
  const XiEtaFirstOrder q = xieta_first_order(jet, r);
  const double emr = std::exp(-r);
  const cd p = q.xi * q.detab + q.dlnxi;
  const cd pb = q.xi * q.dbetab + q.dblnxi;
  OpticalScalars s;
  s.sigma = 2.0 * emr / q.delta * (pb * std::conj(q.dmF) - p * std::conj(q.dpF));
  s.rho = -1.0 + 2.0 * emr / q.delta * (p * q.dmF - pb * q.dpF);
  s.twist = s.rho.imag();
  s.delta = q.delta.real();
  s.delta_imag = q.delta.imag();
  s.kappa = (s.rho * std::conj(s.rho) - s.sigma * std::conj(s.sigma)).real() - 1.0;
  return s;
}

OpticalScalars optical_scalars_xieta(const CongruenceChart& chart, cd nu,
                                     double r) {
  jets(chart, nu);  // domain check
  return optical_scalars_xieta(to_xieta(chart.expand(nu, 1)), r);
}

FrameCoefficients adapted_frame(const XiEtaJet& jet, double r) {
  const XiEtaFirstOrder q = xieta_first_order(jet, r);
  const double s2 = std::sqrt(2.0);
  const cd xib = std::conj(q.xi);
  FrameCoefficients f;
  f.dpF = q.dpF;
  f.dmF = q.dmF;
  f.delta = q.delta;
  f.a = 2.0 * s2 / q.delta * std::conj(q.dpF);
  f.b = -2.0 * s2 / q.delta * std::conj(q.dmF);
  f.omega_c = s2 / q.delta *
              (std::conj(q.dmF) * (xib * q.dbeta + q.xi * q.dbetab) -
               std::conj(q.dpF) * (xib * q.deta + q.xi * q.detab));
  return f;
}

FrameCoefficients adapted_frame(const CongruenceChart& chart, cd nu, double r) {
  jets(chart, nu);
  return adapted_frame(to_xieta(chart.expand(nu, 1)), r);
}

// ---------------------------------------------------------------------------
// Classification

PointClass classify_point(const Jet2& jet) {
  PointClass pc;
  const auto J = j_invariants(jet);
  pc.j12 = std::abs(J(J1, J2));

  // The twist does not depend on r; evaluate where the frame is best
  // conditioned.
  double best = -1.0;
  for (double r : {0.0, 1.0, -1.0, 2.0, -2.0}) {
    const auto f = optical_formulas(jet.mu1.f, jet.mu2.f, J, r);
    if (std::abs(f.delta) > best) {
      best = std::abs(f.delta);
      pc.twist = f.rho.imag();
    }
    if (best > 1.0) break;
  }
  if (best <= kFrameEpsilon) pc.twist = 0.0;

  const cd mu = jet.mu1.d + jet.mu1.db;              // d_u mu1
  const cd mv = kI * (jet.mu1.d - jet.mu1.db);       // d_v mu1
  const double a = mu.real(), b = mv.real(), c = mu.imag(), d = mv.imag();
  const double fro2 = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
  const double s_max = std::sqrt(0.5 * (fro2 + disc));
  const double s_min = s_max > 0.0 ? std::abs(det) / s_max : 0.0;
  const double tol = kClassTolerance * std::max(1.0, s_max);
  pc.rank = (s_max > tol) + (s_min > tol);

  pc.lagrangian = std::abs(pc.twist) <= kClassTolerance;
  pc.complex_point = pc.j12 <= kClassTolerance;
  pc.totally_null = pc.lagrangian && pc.complex_point;
  return pc;
}

PointClass classify_point(const CongruenceChart& chart, cd nu) {
  return classify_point(jets(chart, nu));
}

double pullback_omega_uv(const Jet2& jet) {
  const cd u1 = jet.mu1.d + jet.mu1.db, u2 = jet.mu2.d + jet.mu2.db;
  const cd v1 = kI * (jet.mu1.d - jet.mu1.db), v2 = kI * (jet.mu2.d - jet.mu2.db);
  return omega_form<cd>(jet.mu1.f, jet.mu2.f, u1, u2, v1, v2).real();
}

std::vector<double> focal_parameters(const Jet2& jet) {
  const JInvariants<cd> J = j_invariants(jet);
  const cd mu1 = jet.mu1.f, mu2 = jet.mu2.f;
  const cd c = 1.0 + mu1 * std::conj(mu2), cb = std::conj(c);
  const double a2 = std::norm(mu2), cc = std::norm(c);
  const double P = (J(J2, J2b) / (a2 * cc)).real();
  const double M = (J(J2b, J1) / (c * c) + J(J1b, J2) / (cb * cb)).real();
  const double Q = (a2 * J(J1, J1b) / cc).real();
  // P x^2 + M x + Q = 0 with x = e^{2r} > 0.
  std::vector<double> out;
  auto push = [&](double x) {
    if (x > 0.0 && std::isfinite(x)) out.push_back(0.5 * std::log(x));
  };
  if (P == 0.0) {
    if (M != 0.0) push(-Q / M);
  } else {
    const double disc = M * M - 4.0 * P * Q;
    if (disc < 0.0 && -disc <= 1e-8 * M * M) {
      // A double root lost to rounding (all geodesics through one point).
      push(-M / (2.0 * P));
    } else if (disc >= 0.0) {
      const double q = -0.5 * (M + std::copysign(std::sqrt(disc), M));
      push(q / P);
      if (q != 0.0) push(Q / q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SachsResidual sachs_residual(const Jet2& jet, double r, double h) {
  // Eighth-order central differences: near a focal point rho and sigma vary
  // like 1/(r - r_f), and lower orders lose accuracy well before kFocalMargin.
  static constexpr double kWeights[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  std::array<OpticalScalars, 9> s;
  for (int k = -4; k <= 4; ++k) s[k + 4] = optical_scalars(jet, r + k * h);
  cd drho = 0.0, dsigma = 0.0;
  for (int k = 1; k <= 4; ++k) {
    drho += kWeights[k - 1] * (s[4 + k].rho - s[4 - k].rho);
    dsigma += kWeights[k - 1] * (s[4 + k].sigma - s[4 - k].sigma);
  }
  drho /= h;
  dsigma /= h;
  const OpticalScalars& c = s[4];
  const double scale = std::max(1.0, std::norm(c.rho) + std::norm(c.sigma));
  SachsResidual res;
  res.focal_distance = INFINITY;
  for (double rf : focal_parameters(jet))
    res.focal_distance = std::min(res.focal_distance, std::abs(r - rf));
  res.rho = std::abs(drho - (c.rho * c.rho + std::norm(c.sigma) - 1.0)) / scale;
  res.sigma = std::abs(dsigma - (c.rho + std::conj(c.rho)) * c.sigma) / scale;
  return res;
}

}  // namespace lh3
