#pragma once

// Complex structure J, symplectic form Omega and neutral Kahler metric G on
// the space of oriented geodesics, evaluated on tangent vectors given by
// their holomorphic components (dmu1, dmu2).
//
// Two-forms use the half-normalized wedge,
//   (a ^ b)(X, Y) = (a(X) b(Y) - a(Y) b(X)) / 2,
// which gives G(X, X) = 2 Im[dmu1(X) conj(dmu2(X)) / (1 + mu1 conj(mu2))^2].

#include <array>
#include <complex>

#include "lh3/geodesic_space.hpp"

namespace lh3 {

struct GeodesicTangent {
  OrientedGeodesic base;
  cd dmu1 = 0.0;
  cd dmu2 = 0.0;
};

// Throws BaseMismatch if X and Y are attached to different geodesics.
double omega(const GeodesicTangent& X, const GeodesicTangent& Y);
double metric_G(const GeodesicTangent& X, const GeodesicTangent& Y);
GeodesicTangent apply_J(const GeodesicTangent& X);

// Component forms at a base point (mu1, mu2), usable on series.
template <class T>
T omega_form(const T& mu1, const T& mu2, const T& x1, const T& x2,
             const T& y1, const T& y2) {
  const T c = 1.0 + mu1 * conj(mu2);
  const T w = (x1 * conj(y2) - y1 * conj(x2)) / (c * c);
  return -0.5 * (w + conj(w));
}

template <class T>
T metric_form(const T& mu1, const T& mu2, const T& x1, const T& x2,
              const T& y1, const T& y2) {
  const T c = 1.0 + mu1 * conj(mu2);
  const T w = (x1 * conj(y2) + y1 * conj(x2)) / (c * c);
  return (w - conj(w)) * std::complex<double>(0.0, -0.5);
}

// Real 4x4 Gram matrix of G in the real basis
// (Re dmu1, Im dmu1, Re dmu2, Im dmu2).
std::array<std::array<double, 4>, 4> gram_matrix(const OrientedGeodesic& base);

}  // namespace lh3
