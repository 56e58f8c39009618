#pragma once

// Chart domains in the nu-plane and their sample grids.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

namespace lh3 {

using cd = std::complex<double>;

struct Exclusion {
  cd center;
  double radius;
};

// Rectangle [lower.real, upper.real] x [lower.imag, upper.imag], optionally
// clipped to a disk and with small disks removed (poles of the chart).
struct Domain {
  cd lower{-0.8, -0.8};
  cd upper{0.8, 0.8};
  bool clip_to_disk = true;
  cd disk_center{0.0, 0.0};
  double disk_radius = 0.8;
  std::vector<Exclusion> exclusions;

  static Domain disk(cd center, double radius) {
    Domain d;
    d.lower = center - cd(radius, radius);
    d.upper = center + cd(radius, radius);
    d.clip_to_disk = true;
    d.disk_center = center;
    d.disk_radius = radius;
    return d;
  }

  static Domain rectangle(cd lower, cd upper) {
    Domain d;
    d.lower = lower;
    d.upper = upper;
    d.clip_to_disk = false;
    return d;
  }

  double scale() const {
    return std::max(upper.real() - lower.real(), upper.imag() - lower.imag());
  }

  bool contains(cd nu, double margin = 0.0) const {
    if (nu.real() < lower.real() - margin || nu.real() > upper.real() + margin ||
        nu.imag() < lower.imag() - margin || nu.imag() > upper.imag() + margin)
      return false;
    if (clip_to_disk && std::abs(nu - disk_center) > disk_radius + margin)
      return false;
    for (const auto& e : exclusions)
      if (std::abs(nu - e.center) < e.radius) return false;
    return true;
  }
};

// n x n nodes spanning the domain rectangle; nodes outside the (clipped)
// domain are marked inactive.
class Grid {
 public:
  Grid(const Domain& domain, int n) : domain_(domain), n_(n) {
    hu_ = (domain.upper.real() - domain.lower.real()) / (n - 1);
    hv_ = (domain.upper.imag() - domain.lower.imag()) / (n - 1);
    active_.resize(std::size_t(n) * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        active_[index(i, j)] = domain.contains(node(i, j), 1e-12);
  }

  int size() const { return n_; }
  double hu() const { return hu_; }
  double hv() const { return hv_; }
  const Domain& domain() const { return domain_; }

  std::size_t index(int i, int j) const { return std::size_t(j) * n_ + i; }
  cd node(int i, int j) const {
    return domain_.lower + cd(i * hu_, j * hv_);
  }
  bool active(int i, int j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && active_[index(i, j)];
  }
  std::size_t active_count() const {
    std::size_t c = 0;
    for (bool a : active_) c += a;
    return c;
  }

  // Node nearest to nu among active nodes.
  std::pair<int, int> nearest_active(cd nu) const {
    std::pair<int, int> best{-1, -1};
    double best_d = INFINITY;
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i)
        if (active(i, j) && std::abs(node(i, j) - nu) < best_d) {
          best_d = std::abs(node(i, j) - nu);
          best = {i, j};
        }
    return best;
  }

 private:
  Domain domain_;
  int n_;
  double hu_, hv_;
  std::vector<bool> active_;
};

}  // namespace lh3
