#include "lh3/induced_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lh3 {

namespace {

constexpr cd kI(0.0, 1.0);

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

// Optical scalars at the first r in a fixed list where the frame is
// non-degenerate; the quantities used with it are r-independent.
OpticalScalars scalars_somewhere(const Jet2& jet) {
  for (double r : {0.0, 1.0, -1.0, 2.0, -2.0}) {
    try {
      return optical_scalars(jet, r);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateFrame) throw;
    }
  }
  return optical_scalars(jet, 3.0);
}

}  // namespace

const char* to_string(Signature s) {
  switch (s) {
    case Signature::Lorentz: return "lorentz";
    case Signature::Degenerate: return "degenerate";
    case Signature::Riemannian: return "riemannian";
  }
  return "unknown";
}

const char* to_string(KMethod m) {
  switch (m) {
    case KMethod::ClosedForm: return "closed_form";
    case KMethod::Rank1Chain: return "rank1_chain";
    case KMethod::FdOracle: return "fd_oracle";
  }
  return "unknown";
}

MetricSample make_metric_sample(double g_uu, double g_uv, double g_vv) {
  MetricSample m;
  m.g_uu = g_uu;
  m.g_uv = g_uv;
  m.g_vv = g_vv;
  m.det = g_uu * g_vv - g_uv * g_uv;
  const double scale =
      std::max({std::abs(g_uu), std::abs(g_uv), std::abs(g_vv)});
  if (std::abs(m.det) <= kDegenerateBand * scale * scale)
    m.signature = Signature::Degenerate;
  else
    m.signature = m.det < 0.0 ? Signature::Lorentz : Signature::Riemannian;
  return m;
}

MetricSample pullback_metric(const Jet2& jet) {
  const cd u1 = jet.mu1.d + jet.mu1.db, u2 = jet.mu2.d + jet.mu2.db;
  const cd v1 = kI * (jet.mu1.d - jet.mu1.db), v2 = kI * (jet.mu2.d - jet.mu2.db);
  const cd m1 = jet.mu1.f, m2 = jet.mu2.f;
  return make_metric_sample(metric_form<cd>(m1, m2, u1, u2, u1, u2).real(),
                            metric_form<cd>(m1, m2, u1, u2, v1, v2).real(),
                            metric_form<cd>(m1, m2, v1, v2, v1, v2).real());
}

MetricSample pullback_metric(const CongruenceChart& chart, cd nu) {
  return pullback_metric(jets(chart, nu));
}

MetricComponents<Series> pullback_metric_series(const ChartJet& jet) {
  const Series u1 = jet.mu1.du(), u2 = jet.mu2.du();
  const Series v1 = jet.mu1.dv(), v2 = jet.mu2.dv();
  return {metric_form(jet.mu1, jet.mu2, u1, u2, u1, u2),
          metric_form(jet.mu1, jet.mu2, u1, u2, v1, v2),
          metric_form(jet.mu1, jet.mu2, v1, v2, v1, v2)};
}

MetricSample graph_metric(cd sigma0) {
  return make_metric_sample(2.0 * sigma0.imag(), 2.0 * sigma0.real(),
                            -2.0 * sigma0.imag());
}

Signature signature_classify(const Jet2& jet) {
  const OpticalScalars s = scalars_somewhere(jet);
  const double q = std::norm(s.sigma) - s.twist * s.twist;
  if (std::abs(q) <= kSignatureBand) return Signature::Degenerate;
  return q > 0.0 ? Signature::Lorentz : Signature::Riemannian;
}

Signature signature_classify(const CongruenceChart& chart, cd nu) {
  return signature_classify(jets(chart, nu));
}

DetIdentity det_identity(const Jet2& jet, double r) {
  const MetricSample m = pullback_metric(jet);
  const OpticalScalars s = optical_scalars(jet, r);
  const double q = std::norm(s.sigma) - s.twist * s.twist;
  const double d2 = s.delta * s.delta;
  DetIdentity out;
  out.det = m.det;
  out.rhs_printed = -d2 * q / 64.0;
  out.rhs_corrected = -d2 * q / 16.0;
  out.residual_printed = relative_gap(out.det, out.rhs_printed);
  out.residual_corrected = relative_gap(out.det, out.rhs_corrected);
  out.ratio = out.rhs_printed != 0.0 ? out.det / out.rhs_printed : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Graph coordinates

GraphData graph_data_from_series(const Series& mu2_of_mu1, cd mu1) {
  GraphData g;
  g.mu1 = mu1;
  g.mu2 = mu2_of_mu1;
  const Series m = Series::variable(mu1, mu2_of_mu1.order());
  const Series mu2b = g.mu2.conj();
  const Series c = 1.0 + m * mu2b;
  const Series cb = c.conj();
  g.sigma0 = mu2b.d() / (c * c);
  g.rho0 = g.mu2.d() / (cb * cb);
  return g;
}

GraphData graph_data(const CongruenceChart& chart, cd nu, int order) {
  const ChartJet jet = chart.expand(nu, order);
  if (const auto* e = dynamic_cast<const ExpressionChart*>(&chart);
      e && e->is_graph())
    return graph_data_from_series(jet.mu2, jet.mu1.value());
  const Series H = revert(jet.mu1);
  return graph_data_from_series(compose(jet.mu2, H), jet.mu1.value());
}

ClosedFormK gauss_K_closed_form(const GraphData& g) {
  const Series& s0 = g.sigma0;
  if (s0.order() < 2)
    throw Error(ErrorKind::InsufficientOrder,
                "closed-form curvature needs second derivatives of sigma0");
  const cd s = s0.value();
  if (std::abs(s) <= kFrameEpsilon)
    throw Error(ErrorKind::DegenerateMetric,
                "induced metric vanishes (sigma0 = 0)");
  const cd ds = s0.derivative(1, 0);
  const cd dbs = s0.derivative(0, 1);
  const cd dbdbs = s0.derivative(0, 2);
  const cd sb = std::conj(s);
  const cd d_sb = std::conj(dbs);     // d conj(sigma0)
  const cd db_sb = std::conj(ds);     // dbar conj(sigma0)
  const cd dd_sb = std::conj(dbdbs);  // d^2 conj(sigma0)
  const cd bracket = (d_sb * d_sb - db_sb * dbs) / sb - (dbs * dbs - ds * d_sb) / s;
  const double n2 = std::norm(s);

  ClosedFormK out;
  out.k = (kI / (4.0 * n2) * (2.0 * (dbdbs - dd_sb) + bracket)).real();

  const cd mu1 = g.mu1, mu2 = g.mu2.value();
  const cd c = 1.0 + mu1 * std::conj(mu2);
  out.k_reduced = (kI / n2 *
                   (std::conj(mu2) * d_sb / c - mu2 * dbs / std::conj(c) +
                    0.25 * bracket))
                      .real();
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference curvature

double gauss_curvature_fd(const MetricField& metric, double h) {
  // Metric on the 5 x 5 stencil, g[i][j][a][b] at ((i - 2) h, (j - 2) h).
  using M2 = std::array<std::array<double, 2>, 2>;
  std::array<std::array<M2, 5>, 5> g;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const MetricSample m = metric((i - 2) * h, (j - 2) * h);
      g[i][j] = {{{m.g_uu, m.g_uv}, {m.g_uv, m.g_vv}}};
    }

  // Fourth-order central weights for first and second derivatives.
  const std::array<double, 5> w1 = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0,
                                    -1.0 / 12.0};
  const std::array<double, 5> w2 = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0,
                                    16.0 / 12.0, -1.0 / 12.0};
  // dg[k][a][b] = d_k g_ab, ddg[k][l][a][b] = d_k d_l g_ab at the center.
  std::array<M2, 2> dg{};
  std::array<std::array<M2, 2>, 2> ddg{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      for (int s = 0; s < 5; ++s) {
        dg[0][a][b] += w1[s] * g[s][2][a][b] / h;
        dg[1][a][b] += w1[s] * g[2][s][a][b] / h;
        ddg[0][0][a][b] += w2[s] * g[s][2][a][b] / (h * h);
        ddg[1][1][a][b] += w2[s] * g[2][s][a][b] / (h * h);
        for (int t = 0; t < 5; ++t)
          ddg[0][1][a][b] += w1[s] * w1[t] * g[s][t][a][b] / (h * h);
      }
      ddg[1][0][a][b] = ddg[0][1][a][b];
    }

  const M2& m = g[2][2];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det == 0.0)
    throw Error(ErrorKind::DegenerateMetric, "singular metric at the center");
  const M2 inv = {{{m[1][1] / det, -m[0][1] / det},
                   {-m[1][0] / det, m[0][0] / det}}};
  // d_k of the inverse metric: -inv (d_k g) inv.
  std::array<M2, 2> dinv{};
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d)
            dinv[k][a][b] -= inv[a][c] * dg[k][c][d] * inv[d][b];

  // Lowered symbols S_dbc = d_b g_dc + d_c g_db - d_d g_bc and their
  // derivatives; Gamma^a_bc = inv^{ad} S_dbc / 2.
  auto S = [&](int d, int b, int c) {
    return dg[b][d][c] + dg[c][d][b] - dg[d][b][c];
  };
  auto dS = [&](int k, int d, int b, int c) {
    return ddg[k][b][d][c] + ddg[k][c][d][b] - ddg[k][d][b][c];
  };
  auto gamma = [&](int a, int b, int c) {
    double s = 0.0;
    for (int d = 0; d < 2; ++d) s += inv[a][d] * S(d, b, c);
    return 0.5 * s;
  };
  auto dgamma = [&](int k, int a, int b, int c) {
    double s = 0.0;
    for (int d = 0; d < 2; ++d)
      s += dinv[k][a][d] * S(d, b, c) + inv[a][d] * dS(k, d, b, c);
    return 0.5 * s;
  };

  // R^a_{vuv} = d_u G^a_vv - d_v G^a_uv + G^a_ue G^e_vv - G^a_ve G^e_uv
  const int u = 0, v = 1;
  std::array<double, 2> R{};
  for (int a = 0; a < 2; ++a) {
    double s = dgamma(u, a, v, v) - dgamma(v, a, u, v);
    for (int e = 0; e < 2; ++e)
      s += gamma(a, u, e) * gamma(e, v, v) - gamma(a, v, e) * gamma(e, u, v);
    R[a] = s;
  }
  const double r_uvuv = m[u][0] * R[0] + m[u][1] * R[1];
  return r_uvuv / det;
}

// ---------------------------------------------------------------------------

double gauss_K(const CongruenceChart& chart, cd nu, KMethod method) {
  const MetricSample center = pullback_metric(chart, nu);
  if (center.signature == Signature::Degenerate)
    throw Error(ErrorKind::DegenerateMetric,
                "induced metric is degenerate at " + format_complex(nu));

  switch (method) {
    case KMethod::ClosedForm:
      return gauss_K_closed_form(graph_data(chart, nu, 4)).k;

    case KMethod::Rank1Chain: {
      const ChartJet jet = chart.expand(nu, 3);
      const cd mu_u = jet.mu1.du().value();
      const cd mu_v = jet.mu1.dv().value();
      if (std::abs(mu_u) <= kClassTolerance ||
          std::abs(mu_v) > kClassTolerance * std::max(1.0, std::abs(mu_u)))
        throw Error(ErrorKind::WrongRank,
                    "rank-1 chain needs mu1 to depend on u alone");
      const auto g = pullback_metric_series(jet);
      const Series gamma_uuu = (g.g_uv.du() - 0.5 * g.g_uu.dv()) / g.g_uv;
      return (-gamma_uuu.dv() / g.g_uv).value().real();
    }

    case KMethod::FdOracle: {
      const double h = 1e-3 * chart.domain().scale();
      return gauss_curvature_fd(
          [&](double du, double dv) {
            return pullback_metric(chart.jet2(nu + cd(du, dv)));
          },
          h);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown curvature method");
}

}  // namespace lh3
