#pragma once

// Upper half-space and Poincare ball models of hyperbolic 3-space.

#include <array>
#include <complex>

namespace lh3 {

using cd = std::complex<double>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// Point (x0, x1, x2) of the upper half-space with t = x0 > 0, z = x1 + i x2.
struct UpperHalfPoint {
  double t = 1.0;
  cd z = 0.0;

  Vec3 coords() const { return {t, z.real(), z.imag()}; }
};

struct BallPoint {
  Vec3 y{0.0, 0.0, 0.0};
};

enum class Model { UpperHalfSpace, Ball };

inline constexpr double kChartEpsilon = 1e-9;

BallPoint uhs_to_ball(const UpperHalfPoint& p);

// Throws NearBoundary when |y| > 1 - kChartEpsilon.
UpperHalfPoint ball_to_uhs(const BallPoint& q);

Mat3 metric_tensor(const UpperHalfPoint& p);
Mat3 metric_tensor(const BallPoint& q);

// Hyperbolic distance between two points of the upper half-space.
double distance(const UpperHalfPoint& a, const UpperHalfPoint& b);

// Hyperbolic inner product of Euclidean-coordinate vectors at p.
double inner(const UpperHalfPoint& p, const Vec3& a, const Vec3& b);

}  // namespace lh3
