#include "lh3/catalog.hpp"

#include <cmath>
#include <limits>

namespace lh3 {

namespace {

const Expr kM1 = Expr::variable("m1");
const Expr kC1 = Expr::variable("c1");

Expr c(cd v) { return Expr::constant(v); }

double param(const CatalogRequest& req, const std::string& key, double fallback) {
  const auto it = req.params.find(key);
  return it == req.params.end() ? fallback : it->second;
}

// Removes a disk around a point of the domain.
void exclude(Domain& d, cd point, double radius) {
  if (d.contains(point, radius)) d.exclusions.push_back({point, radius});
}

// Zero of mu2 for the Moebius family (the normal geodesic is vertical there).
std::optional<cd> alpha_zero(const AlphaParams& p) {
  const double s = std::norm(p.A0) + p.A1;
  if (s == 0.0) return std::nullopt;
  return -p.A0 / s;
}

}  // namespace

Domain default_domain() { return Domain::disk(0.0, 0.8); }

Expr alpha_expr(const AlphaParams& p) {
  const double s = std::norm(p.A0) + p.A1;
  return (c(p.A0) + c(s) * kM1) / (c(1.0) + c(std::conj(p.A0)) * kM1);
}

std::optional<cd> alpha_pole(const AlphaParams& p) {
  if (p.A0 == cd(0.0)) return std::nullopt;
  return -1.0 / std::conj(p.A0);
}

cd alpha_coefficient(const AlphaParams& p, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative coefficient index");
  if (n == 0) return p.A0;
  return std::pow(-std::conj(p.A0), n - 1) * p.A1;
}

std::shared_ptr<ExpressionChart> alpha_chart(const AlphaParams& p, Domain domain) {
  if (const auto pole = alpha_pole(p)) {
    if (std::abs(*pole - domain.disk_center) < kPoleMargin ||
        (!domain.clip_to_disk &&
         std::abs(*pole - 0.5 * (domain.lower + domain.upper)) < kPoleMargin))
      throw Error(ErrorKind::PoleInDomain, "pole of mu2 at the domain center");
    exclude(domain, *pole, kPoleMargin);
  }
  if (const auto zero = alpha_zero(p)) exclude(domain, *zero, kVerticalMargin);
  return ExpressionChart::graph(alpha_expr(p), std::move(domain), "alpha");
}

double alpha_r(const AlphaParams& p, double C, cd mu1) {
  const cd w = p.A0 + (p.A1 + std::norm(p.A0)) * mu1;
  return 0.5 * (std::log(std::norm(w)) + C);
}

double alpha_rho(const AlphaParams& p, double C) {
  const double q = p.A1 * std::exp(C);
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  return -(q + 1.0) / (q - 1.0);
}

AlphaParams sphere_congruence(const UpperHalfPoint& center) {
  if (!(center.t > 0.0))
    throw Error(ErrorKind::InvalidArgument, "sphere center must have t > 0");
  const double s = center.t * center.t + std::norm(center.z);
  return {center.z / s, center.t * center.t / (s * s)};
}

UpperHalfPoint sphere_center(const AlphaParams& p) {
  if (!(p.A1 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "sphere congruences have A1 > 0");
  const double s = p.A1 + std::norm(p.A0);
  return {std::sqrt(p.A1) / s, p.A0 / s};
}

double sphere_equation_residual(const UpperHalfPoint& center, cd mu1, cd mu2) {
  const cd z0 = center.z;
  const double s = center.t * center.t + std::norm(z0);
  return std::abs(std::conj(z0) * mu1 * mu2 + s * mu2 - mu1 - z0);
}

ClosestApproach closest_approach(const OrientedGeodesic& g,
                                 const UpperHalfPoint& p) {
  // The geodesic at parameter r is the point over z with
  // tanh r = Re(conj(xi) (z - eta)); distance is convex along it.
  double lo = -40.0, hi = 40.0;
  try {
    const double r = parameter_of(g, p.z);
    lo = r - 20.0;
    hi = r + 20.0;
  } catch (const Error&) {
  }
  auto f = [&](double r) { return distance(point_at(g, r), p); };
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - golden * (hi - lo), b = lo + golden * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - golden * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + golden * (hi - lo);
      fb = f(b);
    }
  }
  const double r = 0.5 * (lo + hi);
  return {r, f(r)};
}

std::shared_ptr<ExpressionChart> horosphere_chart(cd A0, Domain domain) {
  if (A0 == cd(0.0))
    throw Error(ErrorKind::InvalidArgument, "horosphere chart needs A0 != 0");
  return ExpressionChart::graph(c(A0), std::move(domain), "horosphere");
}

TotallyGeodesic totally_geodesic_chart(const AlphaParams& p, Domain domain) {
  if (!(p.A1 < 0.0))
    throw Error(ErrorKind::InvalidArgument, "totally geodesic family needs A1 < 0");
  TotallyGeodesic out;
  out.chart = alpha_chart(p, std::move(domain));
  out.C = -std::log(-p.A1);
  return out;
}

std::shared_ptr<ExpressionChart> flat_conjugate_chart(Domain domain) {
  exclude(domain, 0.0, kVerticalMargin);
  return ExpressionChart::graph(kC1, std::move(domain), "flat-conjugate");
}

std::shared_ptr<ExpressionChart> potential_chart(const Expr& psi, Domain domain,
                                                 const std::string& name) {
  const Expr d = psi.diff(Wirtinger::Dbar);
  return ExpressionChart::graph(d / (c(1.0) - kC1 * d), std::move(domain), name);
}

std::shared_ptr<ExpressionChart> cmc1_chart(cd k, double a, Domain domain) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "cmc1 chart needs a > 0");
  const Expr ep = exp(c(k) * kM1);
  const Expr em = exp(c(-k) * kM1);
  const Expr psi = ln(ep * conj(ep) + c(a) * em * conj(em));
  return potential_chart(psi, std::move(domain), "cmc1");
}

std::shared_ptr<ExpressionChart> horo_canal_chart(double cc, double a,
                                                  Domain domain) {
  if (a == 0.0) throw Error(ErrorKind::InvalidArgument, "horo-canal needs a != 0");
  const Expr u = Expr::variable("u"), v = Expr::variable("v");
  const Expr I = c(cd(0.0, 1.0));
  const Expr w = u + I * c(cc) * pow(u, 2);
  const Expr wp = c(1.0) + I * c(2.0 * cc) * u;
  const Expr wp_abs = exp(c(0.5) * ln(wp * conj(wp)));
  const Expr z_plus = w + c(1.0 / a) * (wp_abs * exp(I * v) - wp);
  return std::make_shared<ExpressionChart>(-w, c(1.0) / conj(z_plus),
                                           std::move(domain), "horo-canal");
}

Domain horo_canal_domain() {
  return Domain::rectangle(cd(-0.4, 0.8), cd(0.4, 2.4));
}

Immersion graph_immersion(const Expr& height) {
  return [height](const Series& nu) -> SurfacePatch {
    return {height.eval_series(nu.value(), nu.order()), nu};
  };
}

Immersion rotational_immersion(const Expr& profile) {
  const Expr t = profile.substitute("s", kM1 * kC1);
  return [t](const Series& nu) -> SurfacePatch {
    return {t.eval_series(nu.value(), nu.order()), nu};
  };
}

Expr rotational_profile(const std::string& name) {
  static const std::map<std::string, std::string> profiles = {
      {"cosh", "0.5*(exp(s) + exp(-s))"},
      {"exp", "exp(0.5*s)"},
      {"quadratic", "1 + 0.5*s + 0.25*s^2"},
  };
  const auto it = profiles.find(name);
  if (it != profiles.end()) return Expr::parse(it->second, {"s"});
  if (name.empty())
    throw Error(ErrorKind::InvalidArgument, "empty rotational profile");
  return Expr::parse(name, {"s"});
}

Domain rotational_domain() {
  return Domain::rectangle(cd(0.25, -0.25), cd(0.75, 0.25));
}

Expr bumpy_height() {
  return Expr::parse("1 + 0.3*u + 0.1*v + 0.08*u*v + 0.05*u^3 - 0.04*v^2");
}

std::vector<std::string> catalog_names() {
  return {"sphere", "horosphere", "totally-geodesic", "alpha",
          "flat-conjugate", "cmc1", "rotational", "bumpy",
          "horo-canal", "custom-expression"};
}

CatalogChart make_catalog_chart(const CatalogRequest& req) {
  const Domain dom = req.domain.value_or(default_domain());
  CatalogChart out;
  const cd a0(param(req, "a0_re", 0.0), param(req, "a0_im", 0.0));

  if (req.name == "sphere") {
    const UpperHalfPoint center = req.center.value_or(UpperHalfPoint{1.0, 0.0});
    const AlphaParams p = sphere_congruence(center);
    out.chart = alpha_chart(p, dom);
    // Sphere of radius R about the center: A1 e^C = e^{2R}.
    const double R = param(req, "radius", 1.0);
    const double C = 2.0 * R - std::log(p.A1);
    out.reference_r = [p, C](cd nu) { return alpha_r(p, C, nu); };
    out.description = "normals to geodesic spheres";
  } else if (req.name == "horosphere") {
    const cd A0 = req.params.count("a0_re") || req.params.count("a0_im") ? a0 : cd(1.0);
    out.chart = horosphere_chart(A0, dom);
    const AlphaParams p{A0, 0.0};
    out.reference_r = [p](cd nu) { return alpha_r(p, 0.0, nu); };
    out.description = "normals to horospheres (constant mu2)";
  } else if (req.name == "totally-geodesic") {
    const AlphaParams p{a0, param(req, "a1", -1.0)};
    const TotallyGeodesic tg = totally_geodesic_chart(p, dom);
    out.chart = tg.chart;
    const double C = tg.C;
    out.reference_r = [p, C](cd nu) { return alpha_r(p, C, nu); };
    out.description = "normals to a totally geodesic plane";
  } else if (req.name == "alpha") {
    const AlphaParams p{a0, param(req, "a1", 1.0)};
    out.chart = alpha_chart(p, dom);
    const double C = param(req, "c", 0.0);
    out.reference_r = [p, C](cd nu) { return alpha_r(p, C, nu); };
    out.description = "Moebius family mu2 = (A0 + (|A0|^2 + A1) mu1)/(1 + conj(A0) mu1)";
  } else if (req.name == "flat-conjugate") {
    out.chart = flat_conjugate_chart(dom);
    // r = ln|mu1| is the focal set; the parallel surface one unit out is not.
    out.reference_r = [](cd nu) { return std::log(std::abs(nu)) + 1.0; };
    out.description = "mu2 = conj(mu1)";
  } else if (req.name == "cmc1") {
    const cd k(param(req, "k_re", 0.7), param(req, "k_im", 0.2));
    auto chart = cmc1_chart(k, param(req, "a", 0.04), dom);
    out.chart = chart;
    out.reference_r = [chart](cd nu) {
      return cmc1_r_series(graph_data(*chart, nu, 2)).value().real();
    };
    out.description = "CMC-1 potential family with sigma0 = k^2";
  } else if (req.name == "rotational" || req.name == "bumpy") {
    const bool rot = req.name == "rotational";
    const Immersion imm =
        rot ? rotational_immersion(
                  rotational_profile(req.profile.empty() ? "cosh" : req.profile))
            : graph_immersion(bumpy_height());
    const NormalCongruence nc = normal_congruence_of_surface(
        imm, req.domain.value_or(rot ? rotational_domain() : default_domain()),
        req.name);
    out.chart = nc.chart;
    out.reference_r = [nc](cd nu) { return nc.r_at(nu); };
    out.description = rot ? "normals to a surface of revolution"
                          : "normals to a non-symmetric graph";
  } else if (req.name == "horo-canal") {
    out.chart = horo_canal_chart(param(req, "c", 0.3), param(req, "a", 0.8),
                                 req.domain.value_or(horo_canal_domain()));
    out.description = "rank-one congruence over a boundary curve";
  } else if (req.name == "custom-expression") {
    if (req.expr.empty())
      throw Error(ErrorKind::InvalidArgument, "custom-expression needs --expr");
    const Expr mu2 = Expr::parse(req.expr);
    if (req.mu1_expr.empty())
      out.chart = ExpressionChart::graph(mu2, dom, "custom-expression");
    else
      out.chart = std::make_shared<ExpressionChart>(Expr::parse(req.mu1_expr), mu2,
                                                    dom, "custom-expression");
    out.description = "user supplied chart";
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown catalog entry '" + req.name + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_lagrangian(const Jet2& jet, cd nu) {
  const PointClass pc = classify_point(jet);
  if (!pc.lagrangian)
    throw Error(ErrorKind::NotLagrangian,
                "chart is not Lagrangian near nu = (" + std::to_string(nu.real()) +
                    ", " + std::to_string(nu.imag()) + ")");
}

}  // namespace

FlatnessReport flatness_test(const CongruenceChart& chart, const Grid& grid) {
  FlatnessReport rep;
  for (int j = 0; j < grid.size(); ++j)
    for (int i = 0; i < grid.size(); ++i) {
      if (!grid.active(i, j)) continue;
      const cd nu = grid.node(i, j);
      const Jet2 jet = chart.jet2(nu);
      require_lagrangian(jet, nu);
      const GraphData g = graph_data(chart, nu, 2);
      rep.max_dmu2 = std::max(rep.max_dmu2, std::abs(g.mu2.derivative(1, 0)));
      try {
        rep.max_kappa = std::max(rep.max_kappa, std::abs(optical_scalars(jet, 0.0).kappa));
      } catch (const Error&) {
      }
    }
  rep.flat = rep.max_dmu2 <= 1e-8;
  return rep;
}

Series cmc1_r_series(const GraphData& g) {
  const int order = g.rho0.order();
  const Series m = Series::variable(g.mu1, order);
  const Series mu2 = g.mu2.truncated(order);
  const Series cb = 1.0 + m.conj() * mu2;
  const Series x = (cb.abs2() * g.rho0 / mu2.abs2()).real();
  return -0.5 * log(x);
}

double codazzi_residual(const GraphData& g) {
  const cd mu2 = g.mu2.value();
  const cd rho0 = g.rho0.value();
  const cd d_conj_sigma0 = std::conj(g.sigma0.derivative(0, 1));
  return std::abs(d_conj_sigma0 - g.rho0.derivative(0, 1) -
                  2.0 * mu2 * rho0 / (1.0 + std::conj(g.mu1) * mu2));
}

Cmc1Report cmc1_test(const CongruenceChart& chart, const Grid& grid) {
  struct Node {
    cd nu;
    GraphData g;
  };
  std::vector<Node> nodes;
  double max_sigma0 = 0.0, min_rho0 = INFINITY;
  Cmc1Report rep;
  for (int j = 0; j < grid.size(); ++j)
    for (int i = 0; i < grid.size(); ++i) {
      if (!grid.active(i, j)) continue;
      const cd nu = grid.node(i, j);
      require_lagrangian(chart.jet2(nu), nu);
      GraphData g = graph_data(chart, nu, 3);
      max_sigma0 = std::max(max_sigma0, std::abs(g.sigma0.value()));
      min_rho0 = std::min(min_rho0, g.rho0.value().real());
      rep.max_dbar_sigma0 =
          std::max(rep.max_dbar_sigma0, std::abs(g.sigma0.derivative(0, 1)));
      nodes.push_back({nu, std::move(g)});
    }
  if (max_sigma0 <= 1e-10) {
    rep.cmc1 = true;
    rep.degenerate = true;
    return rep;
  }
  if (!(min_rho0 > 0.0))
    throw Error(ErrorKind::NonPositiveRho0, "rho0 must be positive for the CMC-1 test");
  rep.cmc1 = rep.max_dbar_sigma0 <= 1e-7;

  for (const Node& n : nodes) {
    const Series r = cmc1_r_series(n.g);
    // Support equation in graph coordinates, evaluated against d r.
    const int order = n.g.mu2.order();
    const ChartJet graph{Series::variable(n.g.mu1, order), n.g.mu2};
    const cd expected = support_differential(graph).value();
    rep.max_condition_residual =
        std::max(rep.max_condition_residual, std::abs(r.d().value() - expected));
    try {
      const OpticalScalars s = optical_scalars(chart, n.nu, r.value().real());
      rep.max_rho_residual = std::max(rep.max_rho_residual, std::abs(s.rho + 1.0));
    } catch (const Error&) {
    }
  }
  return rep;
}

}  // namespace lh3
