#pragma once

// The space of oriented geodesics: holomorphic coordinates (mu1, mu2), the
// (xi, eta) chart, the map Phi to the upper half-space and ideal endpoints.

#include <cmath>
#include <complex>
#include <utility>

#include "lh3/errors.hpp"
#include "lh3/models.hpp"

namespace lh3 {

// Distance to the reflected diagonal mu1 * conj(mu2) = -1 below which
// geodesics are rejected.
inline constexpr double kDiagonalEpsilon = 1e-10;

// A point of the Riemann sphere.
class ExtendedComplex {
 public:
  ExtendedComplex() = default;
  ExtendedComplex(cd value) : value_(value) {}  // NOLINT
  ExtendedComplex(double value) : value_(value) {}  // NOLINT

  static ExtendedComplex infinity() {
    ExtendedComplex e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  // Finite value; throws ChartSingular at infinity.
  cd value() const;

  // Compares in the chart w -> 1/w when either point lies outside the unit
  // disk, so that large finite values and infinity compare sensibly.
  bool approx_equal(const ExtendedComplex& other, double tol) const;

  // 1 / conj(w), with 0 <-> infinity.
  ExtendedComplex inverse_conjugate() const;
  ExtendedComplex negated() const;

 private:
  cd value_ = 0.0;
  bool infinite_ = false;
};

class OrientedGeodesic {
 public:
  // Throws DegenerateGeodesic on the reflected diagonal.
  OrientedGeodesic(ExtendedComplex mu1, ExtendedComplex mu2);
  OrientedGeodesic(cd mu1, cd mu2)
      : OrientedGeodesic(ExtendedComplex(mu1), ExtendedComplex(mu2)) {}
  OrientedGeodesic(double mu1, double mu2) : OrientedGeodesic(cd(mu1), cd(mu2)) {}

  const ExtendedComplex& mu1() const { return mu1_; }
  const ExtendedComplex& mu2() const { return mu2_; }
  bool finite() const { return !mu1_.is_infinite() && !mu2_.is_infinite(); }

  bool approx_equal(const OrientedGeodesic& other, double tol) const {
    return mu1_.approx_equal(other.mu1_, tol) &&
           mu2_.approx_equal(other.mu2_, tol);
  }

 private:
  ExtendedComplex mu1_, mu2_;
};

struct XiEtaCoords {
  cd xi;
  cd eta;
};

XiEtaCoords mu_to_xieta(const OrientedGeodesic& g);
OrientedGeodesic xieta_to_mu(const XiEtaCoords& c);

// Point at affine parameter r, evaluated with the (xi, eta) form of Phi.
UpperHalfPoint point_at(const OrientedGeodesic& g, double r);
// Same point from the holomorphic-coordinate form of Phi.
UpperHalfPoint point_at_mu(const OrientedGeodesic& g, double r);
// Euclidean-coordinate velocity (dt/dr, dx1/dr, dx2/dr) of point_at.
Vec3 velocity_at(const OrientedGeodesic& g, double r);

struct Endpoints {
  ExtendedComplex z_minus;
  ExtendedComplex z_plus;
};

Endpoints boundary_endpoints(const OrientedGeodesic& g);
OrientedGeodesic from_endpoints(const ExtendedComplex& z_minus,
                                const ExtendedComplex& z_plus);

struct GeodesicThrough {
  OrientedGeodesic geodesic;
  double r;
};

// v is a tangent vector at p in Euclidean coordinates (x0, x1, x2) with unit
// hyperbolic norm.
GeodesicThrough geodesic_through(const UpperHalfPoint& p, const Vec3& v);

// Affine parameter of the point of g closest to (t, z) in the (xi, eta)
// chart: tanh r = Re(conj(xi) (z - eta)).
double parameter_of(const OrientedGeodesic& g, cd z);

// Chart expressions shared by scalar and series code.  T is cd or Series.
template <class T>
T xi_of(const T& mu1, const T& mu2) {
  return 2.0 * mu2 / (1.0 + conj(mu1) * mu2);
}

template <class T>
T eta_of(const T& mu1, const T& mu2) {
  const T mu2b = conj(mu2);
  return (1.0 - mu1 * mu2b) / (2.0 * mu2b);
}

template <class T>
struct PhiPoint {
  T t;
  T z;
};

// Phi in holomorphic coordinates with a possibly variable parameter r.
template <class T, class R>
PhiPoint<T> phi(const T& mu1, const T& mu2, const R& r) {
  const T mu2b = conj(mu2);
  const R e2r = exp(2.0 * r);
  const R th = (e2r - 1.0) / (e2r + 1.0);
  const R ch = 0.5 * (exp(r) + exp(-r));
  const T c = 1.0 + mu1 * mu2b;
  PhiPoint<T> out;
  out.z = (1.0 - mu1 * mu2b) / (2.0 * mu2b) + c / (2.0 * mu2b) * th;
  out.t = sqrt(c * conj(c)) / (2.0 * sqrt(mu2 * mu2b) * ch);
  return out;
}

}  // namespace lh3
