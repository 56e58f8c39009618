#include "lh3/orthogonal_surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace lh3 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFlatKappa = 1e-9;

// Derivatives of the slopes d_u r and d_v r along their own direction at a
// node, as many as the chart jets allow (up to five).
struct NodeSlopes {
  int m = 0;        // highest derivative stored
  double ru[6]{};   // d_u^(k+1) r
  double rv[6]{};
  double curl = 0.0;
};

NodeSlopes node_slopes(const CongruenceChart& chart, cd nu) {
  const int order = std::min(chart.max_order(), Series::kMaxOrder);
  const Series P = support_differential(chart.expand(nu, order));
  const Series Pb = P.conj();
  Series fu = P + Pb;                   // d_u r
  Series fv = (P - Pb) * cd(0.0, 1.0);  // d_v r
  NodeSlopes s;
  s.m = order - 1;
  s.curl = std::abs((fv.du() - fu.dv()).value()) /
           std::max(1.0, std::abs(fu.value()) + std::abs(fv.value()));
  for (int k = 0; k <= s.m; ++k) {
    s.ru[k] = fu.value().real();
    s.rv[k] = fv.value().real();
    if (k < s.m) {
      fu = fu.du();
      fv = fv.dv();
    }
  }
  return s;
}

// Two-point Hermite (Obreshkov) rule on [0, h] using derivatives 0..m at
// both ends; exact for polynomials of degree 2m + 1.
double hermite(const double* f0, const double* f1, int m, double h) {
  static constexpr double kCoeff[6][6] = {
      {1.0 / 2},
      {1.0 / 2, 1.0 / 12},
      {1.0 / 2, 1.0 / 10, 1.0 / 120},
      {1.0 / 2, 3.0 / 28, 1.0 / 84, 1.0 / 1680},
      {1.0 / 2, 1.0 / 9, 1.0 / 72, 1.0 / 1008, 1.0 / 30240},
      {1.0 / 2, 5.0 / 44, 1.0 / 66, 1.0 / 792, 1.0 / 15840, 1.0 / 665280},
  };
  double sum = 0.0, hk = h, sign = 1.0;
  for (int k = 0; k <= m; ++k) {
    sum += kCoeff[m][k] * hk * (f0[k] + sign * f1[k]);
    hk *= h;
    sign = -sign;
  }
  return sum;
}

struct SlopeGrid {
  const Grid& grid;
  std::vector<NodeSlopes> slopes;

  SlopeGrid(const CongruenceChart& chart, const Grid& g) : grid(g) {
    slopes.resize(std::size_t(g.size()) * g.size());
    for (int j = 0; j < g.size(); ++j)
      for (int i = 0; i < g.size(); ++i)
        if (g.active(i, j)) slopes[g.index(i, j)] = node_slopes(chart, g.node(i, j));
  }

  // Integral of dr from (i, j) to (i + 1, j).
  double edge_u(int i, int j) const {
    const NodeSlopes& a = slopes[grid.index(i, j)];
    return hermite(a.ru, slopes[grid.index(i + 1, j)].ru, a.m, grid.hu());
  }
  double edge_v(int i, int j) const {
    const NodeSlopes& a = slopes[grid.index(i, j)];
    return hermite(a.rv, slopes[grid.index(i, j + 1)].rv, a.m, grid.hv());
  }

  double curl() const {
    double worst = 0.0;
    for (int j = 0; j < grid.size(); ++j)
      for (int i = 0; i < grid.size(); ++i)
        if (grid.active(i, j)) worst = std::max(worst, slopes[grid.index(i, j)].curl);
    return worst;
  }

  double closedness() const {
    double worst = 0.0;
    const int n = grid.size();
    for (int j = 0; j + 1 < n; ++j)
      for (int i = 0; i + 1 < n; ++i) {
        if (!grid.active(i, j) || !grid.active(i + 1, j) ||
            !grid.active(i, j + 1) || !grid.active(i + 1, j + 1))
          continue;
        const double c =
            edge_u(i, j) + edge_v(i + 1, j) - edge_u(i, j + 1) - edge_v(i, j);
        worst = std::max(worst, std::abs(c));
      }
    return worst;
  }
};

}  // namespace

Series support_differential(const ChartJet& jet) {
  const Series& mu1 = jet.mu1;
  const Series& mu2 = jet.mu2;
  const Series mu1b = mu1.conj(), mu2b = mu2.conj();
  const Series a = mu2 / (1.0 + mu1b * mu2) * (mu1b.d() + mu2.d() / (mu2 * mu2));
  const Series b =
      mu2b / (1.0 + mu1 * mu2b) * (mu1.d() + mu2b.d() / (mu2b * mu2b));
  return 0.5 * (a + b);
}

Series r_series(const ChartJet& jet, double r0) {
  const Series P = support_differential(jet);
  const int order = P.order() + 1;
  Series r(r0, order);
  for (int n = 1; n <= order; ++n)
    for (int b = 0; b <= n; ++b) {
      const int a = n - b;
      if (a >= 1)
        r.coeff(a, b) = P.coeff(a - 1, b) / double(a);
      else
        r.coeff(0, b) = std::conj(P.coeff(b - 1, 0)) / double(b);
    }
  return r;
}

double support_curl(const CongruenceChart& chart, cd nu) {
  return node_slopes(chart, nu).curl;
}

double closedness_residual(const CongruenceChart& chart, const Grid& grid) {
  return SlopeGrid(chart, grid).closedness();
}

RField integrate_r(const CongruenceChart& chart, const Grid& grid, cd nu0,
                   double r0) {
  const auto [ib, jb] = grid.nearest_active(nu0);
  if (ib < 0)
    throw Error(ErrorKind::OutOfDomain, "grid has no active nodes");
  const SlopeGrid sg(chart, grid);

  RField rf{grid, {}, nu0, r0, sg.closedness(), sg.curl()};
  if (rf.curl > kCurlTolerance)
    throw Error(ErrorKind::NotLagrangian,
                "support form is not closed (relative curl " +
                    format_double(rf.curl) + ")");

  const int n = grid.size();
  rf.values.assign(std::size_t(n) * n, kNaN);
  std::vector<bool> done(std::size_t(n) * n, false);
  auto set = [&](int i, int j, double v) {
    rf.values[grid.index(i, j)] = v;
    done[grid.index(i, j)] = true;
  };

  // Carry r0 from nu0 to the base node with the local expansion.
  const cd base = grid.node(ib, jb);
  set(ib, jb, r_series(chart.expand(nu0, 5), r0).eval(base - nu0).real());

  for (int i = ib + 1; i < n && grid.active(i, jb); ++i)
    set(i, jb, rf.at(i - 1, jb) + sg.edge_u(i - 1, jb));
  for (int i = ib - 1; i >= 0 && grid.active(i, jb); --i)
    set(i, jb, rf.at(i + 1, jb) - sg.edge_u(i, jb));
  for (int i = 0; i < n; ++i) {
    if (!done[grid.index(i, jb)]) continue;
    for (int j = jb + 1; j < n && grid.active(i, j); ++j)
      set(i, j, rf.at(i, j - 1) + sg.edge_v(i, j - 1));
    for (int j = jb - 1; j >= 0 && grid.active(i, j); --j)
      set(i, j, rf.at(i, j + 1) - sg.edge_v(i, j));
  }

  // Remaining nodes (behind excluded regions) from reached neighbors.
  std::deque<std::pair<int, int>> queue;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (done[grid.index(i, j)]) queue.emplace_back(i, j);
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    const double r = rf.at(i, j);
    const std::pair<int, int> nbrs[4] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& [a, b] : nbrs) {
      if (!grid.active(a, b) || done[grid.index(a, b)]) continue;
      double v = r;
      if (a == i + 1) v += sg.edge_u(i, j);
      if (a == i - 1) v -= sg.edge_u(a, j);
      if (b == j + 1) v += sg.edge_v(i, j);
      if (b == j - 1) v -= sg.edge_v(i, b);
      set(a, b, v);
      queue.emplace_back(a, b);
    }
  }
  return rf;
}

// ---------------------------------------------------------------------------

std::pair<double, double> principal_curvatures(const OpticalScalars& s) {
  if (std::abs(s.twist) > kClassTolerance * std::max(1.0, std::abs(s.rho)))
    throw Error(ErrorKind::NotLagrangian,
                "principal curvatures need a twist-free point (twist " +
                    format_double(s.twist) + ")");
  const double rho = s.rho.real();
  const double shear = std::abs(s.sigma);
  return {-rho + shear, -rho - shear};
}

SurfaceSamples reconstruct_surface(const CongruenceChart& chart,
                                   const RField& rf) {
  const Grid& grid = rf.grid;
  SurfaceSamples out{grid, {}};
  out.samples.resize(std::size_t(grid.size()) * grid.size());
  for (int j = 0; j < grid.size(); ++j)
    for (int i = 0; i < grid.size(); ++i) {
      if (!grid.active(i, j)) continue;
      SurfaceSample& s = out.samples[grid.index(i, j)];
      s.nu = grid.node(i, j);
      s.r = rf.at(i, j);

      const ChartJet jet = chart.expand(s.nu, 2);
      const Series r = r_series(jet, s.r);
      const PhiPoint<Series> p = phi(jet.mu1, jet.mu2, r);
      s.point.t = p.t.value().real();
      s.point.z = p.z.value();

      const OrientedGeodesic g(jet.mu1.value(), jet.mu2.value());
      const Vec3 e0 = velocity_at(g, s.r);
      const double ne = std::sqrt(e0[0] * e0[0] + e0[1] * e0[1] + e0[2] * e0[2]);
      for (bool along_v : {false, true}) {
        const Series t = along_v ? p.t.dv() : p.t.du();
        const Series z = along_v ? p.z.dv() : p.z.du();
        const Vec3 x = {t.value().real(), z.value().real(), z.value().imag()};
        const double nx = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double dot = x[0] * e0[0] + x[1] * e0[1] + x[2] * e0[2];
        if (nx > 0.0)
          s.orthogonality = std::max(s.orthogonality, std::abs(dot) / (nx * ne));
      }

      OpticalScalars os;
      try {
        os = optical_scalars(chart.jet2(s.nu), s.r);
      } catch (const Error& e) {
        // Focal point: a principal curvature is infinite there.
        if (e.kind() != ErrorKind::DegenerateFrame) throw;
        continue;
      }
      s.rho = os.rho;
      s.sigma = os.sigma;
      const auto [l1, l2] = principal_curvatures(os);
      s.lambda1 = l1;
      s.lambda2 = l2;
      s.kappa = l1 * l2 - 1.0;
      s.valid = true;
    }
  return out;
}

SurfaceKappa surface_kappa(const CongruenceChart& chart, cd nu, double r) {
  const OpticalScalars s = optical_scalars(chart, nu, r);
  if (std::abs(s.twist) > kClassTolerance * std::max(1.0, std::abs(s.rho)))
    throw Error(ErrorKind::NotLagrangian, "surface curvature needs a twist-free point");
  return {s.kappa, std::norm(s.rho) - std::norm(s.sigma) - 1.0};
}

// ---------------------------------------------------------------------------
// Weingarten test

std::optional<DefectSample> weingarten_defect_raw(const SurfaceSamples& s,
                                                  int i, int j) {
  const Grid& g = s.grid;
  for (int k = -3; k <= 3; ++k)
    if (!g.active(i + k, j) || !g.active(i, j + k) ||
        !s.at(i + k, j).valid || !s.at(i, j + k).valid)
      return std::nullopt;
  auto d = [&](bool along_v, bool second) {
    auto val = [&](int k) {
      const SurfaceSample& x = along_v ? s.at(i, j + k) : s.at(i + k, j);
      return second ? x.lambda1 * x.lambda2 : x.lambda1 + x.lambda2;
    };
    const double h = along_v ? g.hv() : g.hu();
    return (-val(-3) + 9.0 * val(-2) - 45.0 * val(-1) + 45.0 * val(1) -
            9.0 * val(2) + val(3)) /
           (60.0 * h);
  };
  // Symmetric functions of the principal curvatures stay smooth across
  // umbilics, where the ordered pair does not; away from umbilics
  // dH ^ dP = (lambda1 - lambda2) dlambda1 ^ dlambda2.
  const double hu = d(false, false), hv = d(true, false);
  const double pu = d(false, true), pv = d(true, true);
  DefectSample out;
  out.raw = hu * pv - hv * pu;
  out.grad_h = std::hypot(hu, hv);
  out.grad_p = std::hypot(pu, pv);
  out.grad_product = out.grad_h * out.grad_p;
  return out;
}

std::vector<double> weingarten_defect(const SurfaceSamples& s) {
  const Grid& g = s.grid;
  double max_h = 1.0, max_p = 1.0;
  for (const SurfaceSample& x : s.samples)
    if (x.valid) {
      max_h = std::max(max_h, std::abs(x.lambda1 + x.lambda2));
      max_p = std::max(max_p, std::abs(x.lambda1 * x.lambda2));
    }
  // A gradient below the floor is numerically zero: constant H or P is
  // itself a functional relation.
  const double floor_h = kDefectGradientFloor * max_h;
  const double floor_p = kDefectGradientFloor * max_p;
  std::vector<double> out(s.samples.size(), kNaN);
  for (int j = 0; j < g.size(); ++j)
    for (int i = 0; i < g.size(); ++i)
      if (const auto d = weingarten_defect_raw(s, i, j))
        out[g.index(i, j)] = std::abs(d->raw) / (std::max(d->grad_h, floor_h) *
                                                 std::max(d->grad_p, floor_p));
  return out;
}

WedgeIdentity wedge_identity(const CongruenceChart& chart, cd nu, double r) {
  const ChartJet jet = chart.expand(nu, 3);
  const Series rs = r_series(jet, r);
  const OpticalFormulas<Series> f = optical_series(jet, rs);
  const Series kappa = f.kappa.real();
  if (std::abs(kappa.value()) <= kFlatKappa)
    throw Error(ErrorKind::FlatPoint,
                "orthogonal surface is flat at " + format_complex(nu));
  const Series f1 = (f.sigma * f.sigma.conj() / (kappa * kappa)).real();
  const Series f2 = ((f.rho + 1.0) / kappa).real();
  const cd lhs_nu = f1.derivative(1, 0) * f2.derivative(0, 1) -
                    f1.derivative(0, 1) * f2.derivative(1, 0);
  const double jac =
      std::norm(jet.mu1.derivative(1, 0)) - std::norm(jet.mu1.derivative(0, 1));
  if (std::abs(jac) <= kFrameEpsilon)
    throw Error(ErrorKind::WrongRank, "wedge identity needs a rank-2 chart");

  const GraphData gd = graph_data(chart, nu, 4);
  const cd mu1 = jet.mu1.value(), mu2 = jet.mu2.value();
  const cd s0 = gd.sigma0.value(), rho0 = gd.rho0.value();
  const double c_abs = std::abs(1.0 + mu1 * std::conj(mu2));
  const cd common = std::norm(mu2) * std::pow(std::norm(s0), 2) /
                    (cd(0.0, 2.0) * std::exp(2.0 * r) * std::pow(rho0, 4));

  WedgeIdentity w;
  w.lhs = lhs_nu / jac;
  w.K = gauss_K_closed_form(gd).k;
  w.factor = -common / (c_abs * c_abs);
  w.factor_printed = common / (c_abs * c_abs * c_abs);
  const cd rhs = w.factor * w.K;
  // Measured in curvature units so that flat surfaces are not judged by
  // the relative size of two vanishing quantities.
  w.residual = std::abs(w.lhs - rhs) / (std::abs(w.factor) * std::max(1.0, std::abs(w.K)));
  const cd printed = w.factor_printed * w.K;
  w.printed_ratio = printed != cd(0.0) ? w.lhs / printed : cd(0.0);
  return w;
}

// ---------------------------------------------------------------------------
// Normal congruence of a surface

UpperHalfPoint NormalCongruence::point(cd nu) const {
  const SurfacePatch p = immersion(Series(nu, 0));
  return {p.t.value().real(), p.z.value()};
}

double NormalCongruence::r_at(cd nu) const {
  return parameter_of(chart->geodesic(nu), point(nu).z);
}

NormalCongruence normal_congruence_of_surface(Immersion immersion,
                                              Domain domain, std::string name) {
  auto fn = [immersion](const Series& nu) -> ChartJet {
    const int order = std::min(nu.order() + 1, Series::kMaxOrder);
    const SurfacePatch p = immersion(Series::variable(nu.value(), order));
    const Series t = p.t.real();
    const Series x1 = p.z.real(), x2 = p.z.imag();
    const Series tu = t.du(), tv = t.dv();
    const Series x1u = x1.du(), x1v = x1.dv(), x2u = x2.du(), x2v = x2.dv();
    const Series n0 = x1u * x2v - x2u * x1v;
    const Series n1 = x2u * tv - tu * x2v;
    const Series n2 = tu * x1v - x1u * tv;
    const Series nz = n1 + n2 * cd(0.0, 1.0);
    const double horizontal = std::abs(nz.value());
    const double total = std::hypot(horizontal, n0.value().real());
    if (total == 0.0)
      throw Error(ErrorKind::ChartSingular, "immersion is not regular");
    if (horizontal <= 1e-12 * total)
      throw Error(ErrorKind::ChartSingular, "normal geodesic is vertical");
    const Series nz_abs = sqrt((n1 * n1 + n2 * n2).real());
    const Series e = nz / nz_abs;
    const Series tt = p.t.truncated(nz.order());
    const Series zz = p.z.truncated(nz.order());
    const Series s_c = tt * n0 / nz_abs;
    const Series R = sqrt(s_c * s_c + tt * tt);
    const Series z_minus = zz + (s_c - R) * e;
    const Series z_plus = zz + (s_c + R) * e;
    if (std::abs(z_plus.value()) <= kDiagonalEpsilon)
      throw Error(ErrorKind::ChartSingular, "normal geodesic ends at the origin");
    return {-z_minus, 1.0 / z_plus.conj()};
  };
  NormalCongruence nc;
  nc.chart = std::make_shared<FunctionChart>(fn, std::move(domain), std::move(name),
                                             Series::kMaxOrder - 1);
  nc.immersion = std::move(immersion);
  return nc;
}

// ---------------------------------------------------------------------------

TheoremReport main_theorem_check(const CongruenceChart& chart, const Grid& grid,
                                 cd nu0, double r0, double tol_K,
                                 double tol_defect) {
  const RField rf = integrate_r(chart, grid, nu0, r0);
  const SurfaceSamples surf = reconstruct_surface(chart, rf);
  const std::vector<double> defect = weingarten_defect(surf);

  TheoremReport rep;
  for (int j = 0; j < grid.size(); ++j)
    for (int i = 0; i < grid.size(); ++i) {
      if (!grid.active(i, j)) continue;
      const SurfaceSample& s = surf.at(i, j);
      TheoremSample t;
      t.nu = s.nu;
      if (!s.valid) {
        ++rep.focal_points;
        rep.samples.push_back(t);
        continue;
      }
      t.kappa = s.kappa;
      t.lambda1 = s.lambda1;
      t.lambda2 = s.lambda2;
      const double q1 = s.lambda1 * s.lambda1, q2 = s.lambda2 * s.lambda2;
      t.rank1_product = (q1 - 1.0) * (q2 - 1.0) / ((q1 + 1.0) * (q2 + 1.0));
      t.rank = classify_point(chart.jet2(s.nu)).rank;
      const double d = defect[grid.index(i, j)];
      if (!std::isnan(d)) {
        t.has_defect = true;
        t.defect = d;
      }
      // det g = -Delta^2/16 (|sigma|^2 - lambda^2) with lambda = 0 here, so
      // the metric degenerates as a whole at umbilics; measure against rho.
      const double near_umbilic =
          std::norm(s.sigma) / std::max(1.0, std::norm(s.rho));
      try {
        if (near_umbilic <= kTheoremDegenerateBand)
          throw Error(ErrorKind::DegenerateMetric, "nearly degenerate metric");
        t.K = gauss_K(chart, s.nu,
                      t.rank == 2 ? KMethod::ClosedForm : KMethod::Rank1Chain);
        t.has_K = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateMetric && e.kind() != ErrorKind::WrongRank)
          throw;
        ++rep.degenerate_points;
      }
      if (t.rank == 2 && t.has_K) {
        try {
          const WedgeIdentity w = wedge_identity(chart, s.nu, s.r);
          t.has_wedge = true;
          t.wedge_residual = w.residual;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::FlatPoint) throw;
          ++rep.flat_points;
        }
      }
      if (t.has_K) rep.max_K = std::max(rep.max_K, std::abs(t.K));
      if (t.has_defect) rep.max_defect = std::max(rep.max_defect, t.defect);
      if (t.has_wedge)
        rep.max_wedge_residual = std::max(rep.max_wedge_residual, t.wedge_residual);
      if (t.rank == 1)
        rep.max_rank1_product =
            std::max(rep.max_rank1_product, std::abs(t.rank1_product));
      rep.samples.push_back(t);
    }
  rep.scalar_flat = rep.max_K <= tol_K;
  rep.weingarten = rep.max_defect <= tol_defect;
  rep.consistent = rep.scalar_flat == rep.weingarten;
  return rep;
}

}  // namespace lh3
