#pragma once

// The neutral metric pulled back to a congruence, its signature and the
// Gauss curvature of the induced metric.
//
// Components are taken in the real chart coordinates nu = u + i v, i.e.
// g_uu = G(f_u, f_u), g_uv = G(f_u, f_v), g_vv = G(f_v, f_v).

#include <functional>

#include "lh3/congruence.hpp"

namespace lh3 {

enum class Signature { Lorentz, Degenerate, Riemannian };

const char* to_string(Signature s);

inline constexpr double kDegenerateBand = 1e-12;
inline constexpr double kSignatureBand = 1e-9;

struct MetricSample {
  double g_uu = 0.0;
  double g_uv = 0.0;
  double g_vv = 0.0;
  double det = 0.0;
  Signature signature = Signature::Degenerate;
};

// Fills det and signature; |det| <= kDegenerateBand * scale^2 with scale the
// largest component is Degenerate.
MetricSample make_metric_sample(double g_uu, double g_uv, double g_vv);

MetricSample pullback_metric(const Jet2& jet);
MetricSample pullback_metric(const CongruenceChart& chart, cd nu);

template <class T>
struct MetricComponents {
  T g_uu, g_uv, g_vv;
};

// Metric components as series in nu (order one below the jet).
MetricComponents<Series> pullback_metric_series(const ChartJet& jet);

// g = -i (sigma0 dmu1^2 - conj(sigma0) dmu1bar^2) in mu1 = u + i v.
MetricSample graph_metric(cd sigma0);

// Sign of |sigma|^2 - lambda^2 with band kSignatureBand.
Signature signature_classify(const Jet2& jet);
Signature signature_classify(const CongruenceChart& chart, cd nu);

// det[f*G] against -(c Delta^2)(|sigma|^2 - lambda^2): the printed constant
// c = 1/64 and the constant 1/16 that holds in the (u, v) convention above.
struct DetIdentity {
  double det = 0.0;
  double rhs_printed = 0.0;
  double rhs_corrected = 0.0;
  double residual_printed = 0.0;    // relative
  double residual_corrected = 0.0;  // relative
  double ratio = 0.0;               // det / rhs_printed
};

DetIdentity det_identity(const Jet2& jet, double r = 0.0);

// A rank-2 chart re-expressed near nu as a graph mu2 = mu2(mu1).  Series are
// in the variable mu1 centered at mu1(nu).
struct GraphData {
  cd mu1 = 0.0;
  Series mu2;
  Series sigma0;  // d conj(mu2) / (1 + mu1 conj(mu2))^2
  Series rho0;    // d mu2 / (1 + conj(mu1) mu2)^2
};

// Throws WrongRank when nu -> mu1 is not invertible at nu.
GraphData graph_data(const CongruenceChart& chart, cd nu, int order = 4);
GraphData graph_data_from_series(const Series& mu2_of_mu1, cd mu1);

enum class KMethod { ClosedForm, Rank1Chain, FdOracle };

const char* to_string(KMethod m);

struct ClosedFormK {
  double k = 0.0;          // second-order form
  double k_reduced = 0.0;  // after eliminating second derivatives
};

ClosedFormK gauss_K_closed_form(const GraphData& g);

// Throws DegenerateMetric when the induced metric degenerates at nu and
// WrongRank when the method does not apply to the chart.
double gauss_K(const CongruenceChart& chart, cd nu, KMethod method);

// Curvature of a 2-d metric from its values near (0, 0) on a 5 x 5 stencil
// of step h: fourth-order differences give the Christoffel symbols and their
// derivatives at the center, then K = R_uvuv / det g.
using MetricField = std::function<MetricSample(double du, double dv)>;
double gauss_curvature_fd(const MetricField& metric, double h);

}  // namespace lh3
