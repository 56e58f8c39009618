#include "lh3/models.hpp"

#include <cmath>

#include "lh3/errors.hpp"

namespace lh3 {

BallPoint uhs_to_ball(const UpperHalfPoint& p) {
  const double x0 = p.t, x1 = p.z.real(), x2 = p.z.imag();
  const double den = (x0 + 1.0) * (x0 + 1.0) + x1 * x1 + x2 * x2;
  return BallPoint{{2.0 * x1 / den, 2.0 * x2 / den,
                    (x0 * x0 + x1 * x1 + x2 * x2 - 1.0) / den}};
}

UpperHalfPoint ball_to_uhs(const BallPoint& q) {
  const auto& y = q.y;
  const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
  if (std::sqrt(r2) > 1.0 - kChartEpsilon)
    throw Error(ErrorKind::NearBoundary, "ball point too close to the boundary");
  const double den = y[0] * y[0] + y[1] * y[1] + (1.0 - y[2]) * (1.0 - y[2]);
  return UpperHalfPoint{(1.0 - r2) / den, cd(2.0 * y[0], 2.0 * y[1]) / den};
}

Mat3 metric_tensor(const UpperHalfPoint& p) {
  const double s = 1.0 / (p.t * p.t);
  return Mat3{{{s, 0, 0}, {0, s, 0}, {0, 0, s}}};
}

Mat3 metric_tensor(const BallPoint& q) {
  const auto& y = q.y;
  const double w = 1.0 - (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
  const double s = 4.0 / (w * w);
  return Mat3{{{s, 0, 0}, {0, s, 0}, {0, 0, s}}};
}

double distance(const UpperHalfPoint& a, const UpperHalfPoint& b) {
  const double dz = std::norm(a.z - b.z);
  const double dt = a.t - b.t;
  // arccosh(1 + x) written to stay accurate for small x.
  const double x = (dz + dt * dt) / (2.0 * a.t * b.t);
  return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

double inner(const UpperHalfPoint& p, const Vec3& a, const Vec3& b) {
  return (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (p.t * p.t);
}

}  // namespace lh3
