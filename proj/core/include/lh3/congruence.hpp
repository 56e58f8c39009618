#pragma once

// Two-parameter families of oriented geodesics given by charts
// nu -> (mu1, mu2): jets, J-invariants, optical scalars, the adapted null
// frame and pointwise classification.
//
// Real chart coordinates are nu = u + i v; the Wirtinger derivatives are
// d = (d_u - i d_v) / 2 and dbar = (d_u + i d_v) / 2.

#include <functional>
#include <vector>
#include <memory>
#include <string>

#include "lh3/errors.hpp"
#include "lh3/expr.hpp"
#include "lh3/geodesic_space.hpp"
#include "lh3/grid.hpp"
#include "lh3/kahler.hpp"
#include "lh3/series.hpp"

namespace lh3 {

inline constexpr double kFrameEpsilon = 1e-10;
inline constexpr double kClassTolerance = 1e-8;

// Taylor expansions of both components at a chart point.
struct ChartJet {
  Series mu1;
  Series mu2;
};

// A value with its Wirtinger partials up to second order.
struct ComponentJet {
  cd f = 0.0;
  cd d = 0.0, db = 0.0;
  cd dd = 0.0, ddb = 0.0, dbdb = 0.0;

  Series series() const;
  static ComponentJet from_series(const Series& s);
};

struct Jet2 {
  cd nu = 0.0;
  ComponentJet mu1;
  ComponentJet mu2;

  ChartJet series() const { return {mu1.series(), mu2.series()}; }
};

class CongruenceChart {
 public:
  CongruenceChart(Domain domain, std::string name)
      : domain_(std::move(domain)), name_(std::move(name)) {}
  virtual ~CongruenceChart() = default;

  // Expansion of (mu1, mu2) at nu to the given order.  Throws
  // InsufficientOrder above max_order().
  virtual ChartJet expand(cd nu, int order) const = 0;
  virtual int max_order() const { return Series::kMaxOrder; }
  // Second-order jet; the default truncates expand().
  virtual Jet2 jet2(cd nu) const;
  virtual bool exact_jets() const { return true; }

  std::pair<cd, cd> eval(cd nu) const;
  OrientedGeodesic geodesic(cd nu) const;

  const Domain& domain() const { return domain_; }
  void set_domain(Domain d) { domain_ = std::move(d); }
  const std::string& name() const { return name_; }

 protected:
  void require_order(int order) const;

 private:
  Domain domain_;
  std::string name_;
};

using ChartPtr = std::shared_ptr<const CongruenceChart>;

// Chart given by two expressions in m1 (= nu), c1, u, v.  Second-order jets
// come from symbolic Wirtinger derivatives.
class ExpressionChart : public CongruenceChart {
 public:
  ExpressionChart(Expr mu1, Expr mu2, Domain domain = Domain(),
                  std::string name = "expression");
  // Graph chart nu = mu1.
  static std::shared_ptr<ExpressionChart> graph(
      const Expr& mu2, Domain domain = Domain(),
      const std::string& name = "expression");

  ChartJet expand(cd nu, int order) const override;
  Jet2 jet2(cd nu) const override;

  const Expr& mu1() const { return mu1_; }
  const Expr& mu2() const { return mu2_; }
  bool is_graph() const;

 private:
  struct SymbolicJet {
    Expr f, d, db, dd, ddb, dbdb;
    ComponentJet eval(cd nu) const;
  };
  static SymbolicJet differentiate(const Expr& e);

  Expr mu1_, mu2_;
  SymbolicJet j1_, j2_;
};

// Chart given by a function on series, e.g. a composition of closed forms.
class FunctionChart : public CongruenceChart {
 public:
  using Fn = std::function<ChartJet(const Series& nu)>;
  FunctionChart(Fn fn, Domain domain, std::string name, int max_order = Series::kMaxOrder)
      : CongruenceChart(std::move(domain), std::move(name)),
        fn_(std::move(fn)),
        max_order_(max_order) {}

  ChartJet expand(cd nu, int order) const override;
  int max_order() const override { return max_order_; }

 private:
  Fn fn_;
  int max_order_;
};

// Chart known only through point values; jets by central differences with
// one Richardson level (first order: step cbrt(eps) max(1,|nu|); second
// order: step eps^(1/6) max(1,|nu|)).
class NumericChart : public CongruenceChart {
 public:
  using Fn = std::function<std::pair<cd, cd>(cd nu)>;
  NumericChart(Fn fn, Domain domain, std::string name = "numeric")
      : CongruenceChart(std::move(domain), std::move(name)), fn_(std::move(fn)) {}

  ChartJet expand(cd nu, int order) const override;
  Jet2 jet2(cd nu) const override;
  int max_order() const override { return 2; }
  bool exact_jets() const override { return false; }

 private:
  Fn fn_;
};

// Throws OutOfDomain when nu is outside the chart domain.
Jet2 jets(const CongruenceChart& chart, cd nu);

// J_{kl} = d mu_k dbar mu_l - dbar mu_k d mu_l for k, l in {1, 2, 1b, 2b}
// (indices 0..3).
template <class T>
struct JInvariants {
  T j[4][4];
  const T& operator()(int k, int l) const { return j[k][l]; }
};

enum JIndex { J1 = 0, J2 = 1, J1b = 2, J2b = 3 };

template <class T>
JInvariants<T> j_invariants(const T& d1, const T& db1, const T& d2,
                            const T& db2) {
  using std::conj;
  const T d[4] = {d1, d2, conj(db1), conj(db2)};
  const T db[4] = {db1, db2, conj(d1), conj(d2)};
  JInvariants<T> out;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) out.j[k][l] = d[k] * db[l] - db[k] * d[l];
  return out;
}

JInvariants<cd> j_invariants(const Jet2& jet);

template <class T>
struct OpticalFormulas {
  T rho;
  T sigma;
  T delta;   // full Delta (four times the quarter display)
  T kappa;   // Gauss curvature of the orthogonal surface (Lagrangian case)
  T lambda;  // twist from its own closed form
};

// Optical scalars of the chart at affine parameter r.  T is cd or Series;
// R is double or Series (a variable parameter r(nu)).
template <class T, class R>
OpticalFormulas<T> optical_formulas(const T& mu1, const T& mu2,
                                    const JInvariants<T>& J, const R& r) {
  using std::conj;
  using std::exp;
  const T mu2b = conj(mu2);
  const T c = 1.0 + mu1 * mu2b;        // 1 + mu1 conj(mu2)
  const T cb = conj(c);                // 1 + conj(mu1) mu2
  const T a2 = mu2 * mu2b;             // |mu2|^2
  const T cc = c * cb;                 // |c|^2
  const R e2r = exp(2.0 * r);
  const T t22 = J(J2, J2b) / (a2 * cc) * e2r;
  const T t11 = a2 * J(J1, J1b) / cc / e2r;
  const T x21 = J(J2, J1b) / (cb * cb);
  const T x12 = J(J1, J2b) / (c * c);
  OpticalFormulas<T> out;
  out.delta = 4.0 * (t22 + J(J2b, J1) / (c * c) + J(J1b, J2) / (cb * cb) + t11);
  const T inv = 1.0 / out.delta;
  out.sigma = 8.0 * mu2 * J(J2b, J1b) * inv / (mu2b * cc);
  out.rho = -1.0 - 8.0 * inv * (x21 - t11);
  out.kappa = 8.0 * inv * (x21 + x12);
  out.lambda = cd(0.0, 4.0) * inv * (x21 - x12);
  return out;
}

struct OpticalScalars {
  cd rho = 0.0;
  cd sigma = 0.0;
  double twist = 0.0;       // Im rho
  double delta = 0.0;       // Re Delta
  double delta_imag = 0.0;  // residue of the complex expression
  double kappa = 0.0;       // closed form, meaningful on Lagrangian charts
};

// Throws DegenerateFrame when |Delta| <= kFrameEpsilon.
OpticalScalars optical_scalars(const Jet2& jet, double r);
OpticalScalars optical_scalars(const CongruenceChart& chart, cd nu, double r);

// Series versions (order one below the chart jet).
OpticalFormulas<Series> optical_series(const ChartJet& jet, const Series& r);

// The same congruence in (xi, eta) coordinates.
struct XiEtaJet {
  Series xi;
  Series eta;
};

XiEtaJet to_xieta(const ChartJet& jet);
ChartJet to_mu(const XiEtaJet& jet);

struct FrameCoefficients {
  cd omega_c = 0.0;
  cd a = 0.0;
  cd b = 0.0;
  cd dpF = 0.0;
  cd dmF = 0.0;
  cd delta = 0.0;  // |dpF|^2 - |dmF|^2
};

// Optical scalars from the (xi, eta) formulas; the jet needs order >= 1.
OpticalScalars optical_scalars_xieta(const XiEtaJet& jet, double r);
OpticalScalars optical_scalars_xieta(const CongruenceChart& chart, cd nu,
                                     double r);
FrameCoefficients adapted_frame(const XiEtaJet& jet, double r);
FrameCoefficients adapted_frame(const CongruenceChart& chart, cd nu, double r);

struct PointClass {
  bool lagrangian = false;
  bool complex_point = false;
  int rank = 0;
  bool totally_null = false;
  double twist = 0.0;
  double j12 = 0.0;  // |J_12|
};

PointClass classify_point(const CongruenceChart& chart, cd nu);
PointClass classify_point(const Jet2& jet);

// Omega evaluated on the image of (d_u, d_v).
double pullback_omega_uv(const Jet2& jet);

// Residuals of d rho/dr = rho^2 + |sigma|^2 - 1 and d sigma/dr = 2 Re(rho)
// sigma, with fourth-order central differences in r of step h.  Residuals
// are divided by max(1, |rho|^2 + |sigma|^2), the size of the right-hand
// sides, so that samples close to a focal point are not over-weighted.
struct SachsResidual {
  double rho = 0.0;
  double sigma = 0.0;
  double focal_distance = 0.0;  // |r - r_f| to the nearest focal point
  double max() const { return rho > sigma ? rho : sigma; }
};

// Parameters r along the geodesic where Delta vanishes (focal points of the
// orthogonal surfaces).  Delta/4 = P e^{2r} + M + Q e^{-2r}, so there are at
// most two.
std::vector<double> focal_parameters(const Jet2& jet);

// Sachs residuals are only meaningful this far (in r) from a focal point,
// where rho and sigma have poles and difference quotients break down.
inline constexpr double kFocalMargin = 0.05;

SachsResidual sachs_residual(const Jet2& jet, double r, double h = 1e-3);

}  // namespace lh3
