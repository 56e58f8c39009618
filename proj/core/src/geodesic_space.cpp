#include "lh3/geodesic_space.hpp"

#include <cmath>

namespace lh3 {

namespace {

void require_chart(const OrientedGeodesic& g) {
  if (!g.finite())
    throw Error(ErrorKind::ChartSingular, "geodesic has an infinite coordinate");
  const cd mu1 = g.mu1().value(), mu2 = g.mu2().value();
  if (std::abs(mu2) <= kDiagonalEpsilon)
    throw Error(ErrorKind::ChartSingular, "mu2 = 0: forward endpoint at infinity");
  if (std::abs(1.0 + std::conj(mu1) * mu2) <= kDiagonalEpsilon)
    throw Error(ErrorKind::ChartSingular, "geodesic on the reflected diagonal");
}

}  // namespace

cd ExtendedComplex::value() const {
  if (infinite_)
    throw Error(ErrorKind::ChartSingular, "value of the point at infinity");
  return value_;
}

bool ExtendedComplex::approx_equal(const ExtendedComplex& other,
                                   double tol) const {
  if (infinite_ && other.infinite_) return true;
  const bool outside_a = infinite_ || std::abs(value_) > 1.0;
  const bool outside_b = other.infinite_ || std::abs(other.value_) > 1.0;
  if (!outside_a && !outside_b) return std::abs(value_ - other.value_) <= tol;
  const cd wa = infinite_ ? cd(0.0) : 1.0 / value_;
  const cd wb = other.infinite_ ? cd(0.0) : 1.0 / other.value_;
  return std::abs(wa - wb) <= tol;
}

ExtendedComplex ExtendedComplex::inverse_conjugate() const {
  if (infinite_) return ExtendedComplex(0.0);
  if (value_ == cd(0.0)) return infinity();
  return ExtendedComplex(1.0 / std::conj(value_));
}

ExtendedComplex ExtendedComplex::negated() const {
  return infinite_ ? *this : ExtendedComplex(-value_);
}

OrientedGeodesic::OrientedGeodesic(ExtendedComplex mu1, ExtendedComplex mu2)
    : mu1_(mu1), mu2_(mu2) {
  bool diagonal = false;
  if (!mu1.is_infinite() && !mu2.is_infinite()) {
    diagonal = std::abs(1.0 + mu1.value() * std::conj(mu2.value())) <=
               kDiagonalEpsilon;
  } else if (mu1.is_infinite() && !mu2.is_infinite()) {
    diagonal = std::abs(mu2.value()) <= kDiagonalEpsilon;
  } else if (!mu1.is_infinite() && mu2.is_infinite()) {
    diagonal = std::abs(mu1.value()) <= kDiagonalEpsilon;
  }
  if (diagonal)
    throw Error(ErrorKind::DegenerateGeodesic,
                "coordinates lie on the reflected diagonal");
}

XiEtaCoords mu_to_xieta(const OrientedGeodesic& g) {
  require_chart(g);
  const cd mu1 = g.mu1().value(), mu2 = g.mu2().value();
  return {xi_of(mu1, mu2), eta_of(mu1, mu2)};
}

OrientedGeodesic xieta_to_mu(const XiEtaCoords& c) {
  if (std::abs(c.xi) == 0.0)
    throw Error(ErrorKind::ChartSingular, "xi = 0");
  const cd inv_xib = 1.0 / std::conj(c.xi);
  // Endpoints are eta -/+ 1/conj(xi).
  return from_endpoints(ExtendedComplex(c.eta - inv_xib),
                        ExtendedComplex(c.eta + inv_xib));
}

UpperHalfPoint point_at(const OrientedGeodesic& g, double r) {
  const XiEtaCoords c = mu_to_xieta(g);
  return UpperHalfPoint{1.0 / (std::abs(c.xi) * std::cosh(r)),
                        c.eta + std::tanh(r) / std::conj(c.xi)};
}

UpperHalfPoint point_at_mu(const OrientedGeodesic& g, double r) {
  require_chart(g);
  const PhiPoint<cd> p = phi(g.mu1().value(), g.mu2().value(), r);
  return UpperHalfPoint{p.t.real(), p.z};
}

Vec3 velocity_at(const OrientedGeodesic& g, double r) {
  const XiEtaCoords c = mu_to_xieta(g);
  const double ch = std::cosh(r), th = std::tanh(r);
  const double t = 1.0 / (std::abs(c.xi) * ch);
  const cd dz = 1.0 / (ch * ch * std::conj(c.xi));
  return {-t * th, dz.real(), dz.imag()};
}

Endpoints boundary_endpoints(const OrientedGeodesic& g) {
  return {g.mu1().negated(), g.mu2().inverse_conjugate()};
}

OrientedGeodesic from_endpoints(const ExtendedComplex& z_minus,
                                const ExtendedComplex& z_plus) {
  if (z_minus.approx_equal(z_plus, 1e-14))
    throw Error(ErrorKind::DegenerateGeodesic, "endpoints coincide");
  return OrientedGeodesic(z_minus.negated(), z_plus.inverse_conjugate());
}

double parameter_of(const OrientedGeodesic& g, cd z) {
  const XiEtaCoords c = mu_to_xieta(g);
  const double th = (std::conj(c.xi) * (z - c.eta)).real();
  if (std::abs(th) >= 1.0)
    throw Error(ErrorKind::OutOfDomain, "point not on the geodesic");
  return std::atanh(th);
}

GeodesicThrough geodesic_through(const UpperHalfPoint& p, const Vec3& v) {
  if (!(p.t > 0.0))
    throw Error(ErrorKind::InvalidArgument, "t must be positive");
  const double norm = std::sqrt(inner(p, v, v));
  if (!(norm > 0.0))
    throw Error(ErrorKind::InvalidArgument, "zero tangent vector");
  const double n0 = v[0] / norm;
  const cd nz = cd(v[1], v[2]) / norm;
  const double horizontal = std::abs(nz);
  if (horizontal <= 1e-14 * std::abs(n0))
    throw Error(ErrorKind::ChartSingular, "vertical geodesic");
  const cd e = nz / horizontal;
  const double sc = p.t * n0 / horizontal;
  const double radius = std::hypot(sc, p.t);
  // The geodesic is the semicircle of Euclidean radius `radius` centred at
  // the boundary point z + sc * e, traversed in the direction of +e.
  const ExtendedComplex z_plus(p.z + (sc + radius) * e);
  const ExtendedComplex z_minus(p.z + (sc - radius) * e);
  OrientedGeodesic g = from_endpoints(z_minus, z_plus);
  return {g, parameter_of(g, p.z)};
}

}  // namespace lh3
