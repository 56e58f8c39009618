#pragma once

// Closed-form congruence families and the flat / CMC-1 classification
// tests.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lh3/congruence.hpp"
#include "lh3/induced_geometry.hpp"
#include "lh3/orthogonal_surfaces.hpp"

namespace lh3 {

inline constexpr double kPoleMargin = 0.05;
// Where mu2 = 0 the normal geodesic is vertical and r diverges
// logarithmically; catalog domains keep this far from such points.
inline constexpr double kVerticalMargin = 0.2;

// Disk |nu| <= 0.8, sampled on a 41 x 41 grid by default.
Domain default_domain();
inline constexpr int kDefaultGridSize = 41;

// mu2 = (A0 + (|A0|^2 + A1) mu1) / (1 + conj(A0) mu1)
struct AlphaParams {
  cd A0 = 0.0;
  double A1 = 1.0;
};

Expr alpha_expr(const AlphaParams& p);
// Pole mu1 = -1/conj(A0) of the Moebius map, if any.
std::optional<cd> alpha_pole(const AlphaParams& p);
// Taylor coefficient of mu2 in mu1 at 0 from the closed recursion:
// A_n = (-1)^(n-1) conj(A0)^(n-1) A1 for n >= 1.
cd alpha_coefficient(const AlphaParams& p, int n);

// The chart domain excludes a kPoleMargin disk around the pole and a
// kVerticalMargin disk around the zero of mu2; throws
// PoleInDomain when the pole is the center of the domain disk.
std::shared_ptr<ExpressionChart> alpha_chart(const AlphaParams& p,
                                             Domain domain = default_domain());

// 2r = ln|A0 + (A1 + |A0|^2) mu1|^2 + C
double alpha_r(const AlphaParams& p, double C, cd mu1);
// rho = -(A1 e^C + 1) / (A1 e^C - 1)
double alpha_rho(const AlphaParams& p, double C);

// Parameters of the congruence of normals to the geodesic sphere with the
// given center: A0 = z0 / (t0^2 + |z0|^2), A1 = t0^2 / (t0^2 + |z0|^2)^2.
// Throws InvalidArgument when t0 <= 0.
AlphaParams sphere_congruence(const UpperHalfPoint& center);
// z0 = A0 / (A1 + |A0|^2), t0 = sqrt(A1) / (A1 + |A0|^2); A1 > 0.
UpperHalfPoint sphere_center(const AlphaParams& p);
// |conj(z0) mu1 mu2 + (t0^2 + |z0|^2) mu2 - mu1 - z0|
double sphere_equation_residual(const UpperHalfPoint& center, cd mu1, cd mu2);
// Parameter r0 at which the geodesic (mu1, mu2) passes closest to p, and
// the hyperbolic distance there.
struct ClosestApproach {
  double r = 0.0;
  double distance = 0.0;
};
ClosestApproach closest_approach(const OrientedGeodesic& g,
                                 const UpperHalfPoint& p);

std::shared_ptr<ExpressionChart> horosphere_chart(cd A0,
                                                  Domain domain = default_domain());

struct TotallyGeodesic {
  std::shared_ptr<ExpressionChart> chart;
  double C = 0.0;  // -ln(-A1)
};
// Throws InvalidArgument unless A1 < 0.
TotallyGeodesic totally_geodesic_chart(const AlphaParams& p,
                                       Domain domain = default_domain());

// mu2 = conj(mu1)
std::shared_ptr<ExpressionChart> flat_conjugate_chart(Domain domain = default_domain());

// mu2 = dbar psi / (1 - conj(mu1) dbar psi) for a real potential psi(m1, c1);
// then rho0 = d dbar psi and sigma0 = e^-psi d^2 e^psi.
std::shared_ptr<ExpressionChart> potential_chart(const Expr& psi,
                                                 Domain domain = default_domain(),
                                                 const std::string& name = "potential");

// Potential psi = ln(|e^{k m1}|^2 + a |e^{-k m1}|^2), a > 0: sigma0 = k^2.
// mu2 vanishes on the line Re(k m1) = ln(a)/4, which the defaults keep
// outside the default domain.
std::shared_ptr<ExpressionChart> cmc1_chart(cd k = cd(0.7, 0.2), double a = 0.04,
                                            Domain domain = default_domain());

// Rank-1 chart built from a boundary curve w(u) = u + i c u^2 and growth
// D(u) = exp(a u):
//   mu1 = -w(u),  mu2 = 1 / conj(w + (D/D') (|w'| e^{iv} - w')).
std::shared_ptr<ExpressionChart> horo_canal_chart(double c, double a,
                                                  Domain domain);
Domain horo_canal_domain();

// Graph surfaces t = height(nu), z = nu.
Immersion graph_immersion(const Expr& height);
// Surfaces of revolution about the vertical axis: t = P(|z|^2), with the
// profile P an expression in s.
Immersion rotational_immersion(const Expr& profile);
// Named profiles: cosh, exp, quadratic.  Throws InvalidArgument.
Expr rotational_profile(const std::string& name);
// Off-axis rectangle used for surfaces of revolution.
Domain rotational_domain();
// A non-symmetric graph without horizontal tangent planes on the default
// domain: t = 1 + 0.3u + 0.1v + 0.08uv + 0.05u^3 - 0.04v^2.
Expr bumpy_height();

// A chart together with a reference support function, when one is known.
struct CatalogChart {
  ChartPtr chart;
  std::function<double(cd)> reference_r;  // may be empty
  std::string description;
};

struct CatalogRequest {
  std::string name;
  std::optional<UpperHalfPoint> center;
  std::map<std::string, double> params;
  std::string profile;
  std::string expr;      // mu2 expression
  std::string mu1_expr;  // optional mu1 expression (general chart)
  std::optional<Domain> domain;
};

// Known names: sphere, horosphere, totally-geodesic, alpha, flat-conjugate,
// cmc1, rotational, bumpy, horo-canal, custom-expression.
CatalogChart make_catalog_chart(const CatalogRequest& req);
std::vector<std::string> catalog_names();

struct FlatnessReport {
  bool flat = false;
  double max_dmu2 = 0.0;   // |d mu2| in graph coordinates
  double max_kappa = 0.0;  // |kappa| at r = 0
};

// Throws NotLagrangian when some sample has non-zero twist.
FlatnessReport flatness_test(const CongruenceChart& chart, const Grid& grid);

struct Cmc1Report {
  bool cmc1 = false;
  bool degenerate = false;  // sigma0 vanishes identically
  double max_dbar_sigma0 = 0.0;
  double max_rho_residual = 0.0;        // |rho + 1| at the closed-form r
  double max_condition_residual = 0.0;  // support equation at that r
};

// Throws NotLagrangian; NonPositiveRho0 when rho0 <= 0 somewhere (unless
// sigma0 vanishes identically).
Cmc1Report cmc1_test(const CongruenceChart& chart, const Grid& grid);

// r = -1/2 ln(|1 + conj(mu1) mu2|^2 rho0 / |mu2|^2) as a series in mu1.
Series cmc1_r_series(const GraphData& g);

// |d conj(sigma0) - dbar rho0 - 2 mu2 rho0 / (1 + conj(mu1) mu2)|
double codazzi_residual(const GraphData& g);

}  // namespace lh3
