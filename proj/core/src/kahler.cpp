#include "lh3/kahler.hpp"

namespace lh3 {

namespace {

void require_same_base(const GeodesicTangent& X, const GeodesicTangent& Y) {
  if (!X.base.approx_equal(Y.base, 0.0))
    throw Error(ErrorKind::BaseMismatch, "tangent vectors at different bases");
  if (!X.base.finite())
    throw Error(ErrorKind::ChartSingular, "base outside the holomorphic chart");
}

}  // namespace

double omega(const GeodesicTangent& X, const GeodesicTangent& Y) {
  require_same_base(X, Y);
  const cd mu1 = X.base.mu1().value(), mu2 = X.base.mu2().value();
  return omega_form<cd>(mu1, mu2, X.dmu1, X.dmu2, Y.dmu1, Y.dmu2).real();
}

double metric_G(const GeodesicTangent& X, const GeodesicTangent& Y) {
  require_same_base(X, Y);
  const cd mu1 = X.base.mu1().value(), mu2 = X.base.mu2().value();
  return metric_form<cd>(mu1, mu2, X.dmu1, X.dmu2, Y.dmu1, Y.dmu2).real();
}

GeodesicTangent apply_J(const GeodesicTangent& X) {
  const cd i(0.0, 1.0);
  return GeodesicTangent{X.base, i * X.dmu1, i * X.dmu2};
}

std::array<std::array<double, 4>, 4> gram_matrix(const OrientedGeodesic& base) {
  const cd basis[4][2] = {{1.0, 0.0}, {cd(0, 1), 0.0}, {0.0, 1.0}, {0.0, cd(0, 1)}};
  std::array<std::array<double, 4>, 4> g{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      g[a][b] = metric_G(GeodesicTangent{base, basis[a][0], basis[a][1]},
                         GeodesicTangent{base, basis[b][0], basis[b][1]});
  return g;
}

}  // namespace lh3
