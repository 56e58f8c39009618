#pragma once

// Truncated bivariate Taylor expansions in (h, conj(h)).
//
// A Series represents a smooth complex-valued function of a complex variable
// near an expansion point nu0 by the coefficients c[a][b] of h^a conj(h)^b,
// h = nu - nu0.  Since c[a][b] = (d^a dbar^b f)(nu0) / (a! b!), arithmetic on
// Series is forward-mode automatic differentiation for the Wirtinger operators
// d = d/d nu and dbar = d/d conj(nu), to any order up to kMaxOrder.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "lh3/errors.hpp"

namespace lh3 {

using cd = std::complex<double>;

class Series {
 public:
  static constexpr int kMaxOrder = 6;
  static constexpr int kSize = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

  static constexpr int index(int a, int b) {
    const int n = a + b;
    return n * (n + 1) / 2 + b;
  }

  Series() : order_(kMaxOrder) { c_.fill(cd(0.0)); }
  Series(cd value, int order = kMaxOrder) : order_(order) {  // NOLINT
    c_.fill(cd(0.0));
    c_[0] = value;
  }
  Series(double value, int order = kMaxOrder)  // NOLINT
      : Series(cd(value), order) {}

  // The identity function nu, expanded at nu0.
  static Series variable(cd nu0, int order) {
    Series s(nu0, order);
    if (order >= 1) s.c_[index(1, 0)] = 1.0;
    return s;
  }

  // A real coordinate line: u = Re(nu) (imag_part = false) or v = Im(nu).
  static Series real_coordinate(cd nu0, int order, bool imag_part) {
    Series s(imag_part ? nu0.imag() : nu0.real(), order);
    if (order >= 1) {
      if (imag_part) {
        s.c_[index(1, 0)] = cd(0.0, -0.5);
        s.c_[index(0, 1)] = cd(0.0, 0.5);
      } else {
        s.c_[index(1, 0)] = 0.5;
        s.c_[index(0, 1)] = 0.5;
      }
    }
    return s;
  }

  int order() const { return order_; }
  cd value() const { return c_[0]; }
  cd coeff(int a, int b) const {
    return (a + b <= order_) ? c_[index(a, b)] : cd(0.0);
  }
  cd& coeff(int a, int b) { return c_[index(a, b)]; }

  // (d^a dbar^b f)(nu0).
  cd derivative(int a, int b) const {
    return coeff(a, b) * factorial(a) * factorial(b);
  }

  Series truncated(int order) const {
    Series r = *this;
    if (order < r.order_) {
      r.order_ = order < 0 ? 0 : order;
      r.mask();
    }
    return r;
  }

  // Wirtinger derivatives as series (one order lower).
  Series d() const {
    Series r(0.0, order_ > 0 ? order_ - 1 : 0);
    for (int n = 1; n <= order_; ++n)
      for (int b = 0; b < n; ++b) {
        const int a = n - b;
        r.c_[index(a - 1, b)] = double(a) * c_[index(a, b)];
      }
    return r;
  }
  Series dbar() const {
    Series r(0.0, order_ > 0 ? order_ - 1 : 0);
    for (int n = 1; n <= order_; ++n)
      for (int b = 1; b <= n; ++b) {
        const int a = n - b;
        r.c_[index(a, b - 1)] = double(b) * c_[index(a, b)];
      }
    return r;
  }
  // Real-coordinate derivatives for nu = u + i v.
  Series du() const { return d() + dbar(); }
  Series dv() const { return (d() - dbar()) * cd(0.0, 1.0); }

  // Complex conjugate function: coefficients c'[a][b] = conj(c[b][a]).
  Series conj() const {
    Series r(0.0, order_);
    for (int n = 0; n <= order_; ++n)
      for (int b = 0; b <= n; ++b)
        r.c_[index(n - b, b)] = std::conj(c_[index(b, n - b)]);
    return r;
  }
  Series real() const { return (*this + conj()) * 0.5; }
  Series imag() const { return (*this - conj()) * cd(0.0, -0.5); }
  Series abs2() const { return *this * conj(); }

  // Evaluate the truncated polynomial at nu0 + h.
  cd eval(cd h) const {
    cd sum = 0.0;
    const cd hb = std::conj(h);
    for (int n = 0; n <= order_; ++n)
      for (int b = 0; b <= n; ++b)
        sum += c_[index(n - b, b)] * std::pow(h, n - b) * std::pow(hb, b);
    return sum;
  }

  // Apply a scalar analytic function given its derivatives at value():
  // derivs[k] = f^(k)(value()), k = 0..order().
  template <class DerivFn>
  Series apply(DerivFn&& derivs) const {
    Series h = *this;
    h.c_[0] = 0.0;
    const cd x0 = c_[0];
    // Horner in the nilpotent part h.
    Series r(derivs(order_, x0) / factorial(order_), order_);
    for (int k = order_ - 1; k >= 0; --k) {
      r = r * h;
      r.c_[0] += derivs(k, x0) / factorial(k);
    }
    return r;
  }

  Series& operator+=(const Series& o) {
    order_ = std::min(order_, o.order_);
    for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
    mask();
    return *this;
  }
  Series& operator-=(const Series& o) {
    order_ = std::min(order_, o.order_);
    for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    mask();
    return *this;
  }
  Series& operator*=(cd s) {
    for (int i = 0; i < size(); ++i) c_[i] *= s;
    return *this;
  }
  Series& operator*=(double s) { return *this *= cd(s); }
  Series& operator+=(cd s) { c_[0] += s; return *this; }
  Series& operator-=(cd s) { c_[0] -= s; return *this; }

  friend Series operator-(const Series& a) {
    Series r = a;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator+(Series a, cd s) { return a += s; }
  friend Series operator+(cd s, Series a) { return a += s; }
  friend Series operator-(Series a, cd s) { return a -= s; }
  friend Series operator-(cd s, const Series& a) { return (-a) += s; }
  friend Series operator+(Series a, double s) { return a += cd(s); }
  friend Series operator+(double s, Series a) { return a += cd(s); }
  friend Series operator-(Series a, double s) { return a -= cd(s); }
  friend Series operator-(double s, const Series& a) { return (-a) += cd(s); }
  friend Series operator*(Series a, cd s) { return a *= s; }
  friend Series operator*(cd s, Series a) { return a *= s; }
  friend Series operator*(Series a, double s) { return a *= s; }
  friend Series operator*(double s, Series a) { return a *= s; }
  friend Series operator/(Series a, cd s) { return a *= (1.0 / s); }
  friend Series operator/(Series a, double s) { return a *= (1.0 / s); }

  friend Series operator*(const Series& x, const Series& y) {
    const int n_max = std::min(x.order_, y.order_);
    Series r(0.0, n_max);
    for (int ax = 0; ax <= n_max; ++ax)
      for (int bx = 0; ax + bx <= n_max; ++bx) {
        const cd cx = x.c_[index(ax, bx)];
        if (cx == cd(0.0)) continue;
        for (int ay = 0; ax + bx + ay <= n_max; ++ay)
          for (int by = 0; ax + bx + ay + by <= n_max; ++by)
            r.c_[index(ax + ay, bx + by)] += cx * y.c_[index(ay, by)];
      }
    return r;
  }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  Series reciprocal() const {
    const cd x0 = c_[0];
    if (std::abs(x0) <= 1e-300)
      throw Error(ErrorKind::DivisionByZero, "series reciprocal of zero");
    return apply([](int k, cd x) {
      // d^k/dx^k 1/x = (-1)^k k! / x^(k+1)
      return (k % 2 ? -1.0 : 1.0) * factorial(k) / std::pow(x, k + 1);
    });
  }
  friend Series operator/(const Series& a, const Series& b) {
    return a * b.reciprocal();
  }
  friend Series operator/(cd s, const Series& b) { return s * b.reciprocal(); }
  friend Series operator/(double s, const Series& b) {
    return s * b.reciprocal();
  }
  Series& operator/=(const Series& o) { return *this = *this / o; }

  static double factorial(int k) {
    static constexpr double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
    return table[k];
  }

 private:
  int size() const { return (order_ + 1) * (order_ + 2) / 2; }
  void mask() {
    for (int i = size(); i < kSize; ++i) c_[i] = 0.0;
  }

  std::array<cd, kSize> c_;
  int order_;
};

inline Series conj(const Series& s) { return s.conj(); }
inline Series real_part(const Series& s) { return s.real(); }
inline cd real_part(cd z) { return cd(z.real(), 0.0); }
inline Series norm2(const Series& s) { return s.abs2(); }
inline cd norm2(cd z) { return cd(std::norm(z), 0.0); }
inline cd value_of(const Series& s) { return s.value(); }
inline cd value_of(cd z) { return z; }

inline Series exp(const Series& s) {
  return s.apply([](int, cd x) { return std::exp(x); });
}

inline Series log(const Series& s) {
  if (std::abs(s.value()) == 0.0)
    throw Error(ErrorKind::DomainError, "log of zero");
  return s.apply([](int k, cd x) {
    if (k == 0) return std::log(x);
    // d^k/dx^k log x = (-1)^(k-1) (k-1)! / x^k
    return ((k - 1) % 2 ? -1.0 : 1.0) * Series::factorial(k - 1) /
           std::pow(x, k);
  });
}

// Power with a real exponent on the principal branch.
inline Series pow(const Series& s, double p) {
  return s.apply([p](int k, cd x) {
    double coef = 1.0;
    for (int j = 0; j < k; ++j) coef *= (p - j);
    return coef * std::pow(x, p - k);
  });
}

inline Series pow(const Series& s, int n) {
  if (n < 0) return pow(s, -n).reciprocal();
  Series r(1.0, s.order());
  Series base = s;
  while (n) {
    if (n & 1) r *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return r;
}

inline Series sqrt(const Series& s) { return pow(s, 0.5); }

// Functions of a real argument used on real-valued series.
inline Series atanh(const Series& s) {
  return 0.5 * (log(1.0 + s) - log(1.0 - s));
}

// f(H, conj(H)) for f expanded at H's value: substitutes the nilpotent part
// of H for h.  The result is a series in the variables of H.
inline Series compose(const Series& f, const Series& H) {
  Series dh = H;
  dh -= H.value();
  const Series dhb = dh.conj();
  const int order = std::min(f.order(), H.order());
  // Powers of dh and dhb.
  std::array<Series, Series::kMaxOrder + 1> ph, pb;
  ph[0] = Series(1.0, order);
  pb[0] = Series(1.0, order);
  for (int k = 1; k <= order; ++k) {
    ph[k] = ph[k - 1] * dh;
    pb[k] = pb[k - 1] * dhb;
  }
  Series r(0.0, order);
  for (int n = 0; n <= order; ++n)
    for (int b = 0; b <= n; ++b) {
      const cd c = f.coeff(n - b, b);
      if (c != cd(0.0)) r += c * (ph[n - b] * pb[b]);
    }
  return r;
}

// Local inverse of a map g: given g expanded at nu0 with value w0, returns H
// (a series in the new variable k = w - w0, with H(0) = 0) such that
// g(nu0 + H(k)) = w0 + k.  Requires |g_nu|^2 != |g_nubar|^2 at nu0.
inline Series revert(const Series& g) {
  const int order = g.order();
  const cd p = g.coeff(1, 0);
  const cd q = g.coeff(0, 1);
  const double det = std::norm(p) - std::norm(q);
  if (std::abs(det) < 1e-14)
    throw Error(ErrorKind::WrongRank, "map is not locally invertible");
  Series nonlinear = g;
  nonlinear.coeff(0, 0) = 0.0;
  if (order >= 1) {
    nonlinear.coeff(1, 0) = 0.0;
    nonlinear.coeff(0, 1) = 0.0;
  }
  const Series k = Series::variable(0.0, order);
  auto linear_inverse = [&](const Series& w) {
    return (std::conj(p) * w - q * w.conj()) / det;
  };
  Series H = linear_inverse(k);
  for (int it = 1; it < order; ++it) {
    // Substitute H into the nonlinear part of g.
    Series nH(0.0, order);
    {
      std::array<Series, Series::kMaxOrder + 1> ph, pb;
      const Series Hb = H.conj();
      ph[0] = Series(1.0, order);
      pb[0] = Series(1.0, order);
      for (int j = 1; j <= order; ++j) {
        ph[j] = ph[j - 1] * H;
        pb[j] = pb[j - 1] * Hb;
      }
      for (int n = 2; n <= order; ++n)
        for (int b = 0; b <= n; ++b) {
          const cd c = nonlinear.coeff(n - b, b);
          if (c != cd(0.0)) nH += c * (ph[n - b] * pb[b]);
        }
    }
    H = linear_inverse(k - nH);
  }
  return H;
}

}  // namespace lh3
