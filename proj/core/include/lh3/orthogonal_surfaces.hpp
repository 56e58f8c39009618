#pragma once

// Surfaces orthogonal to a Lagrangian congruence: the support function r,
// reconstruction, principal curvatures, the Weingarten test and the
// curvature dichotomy; also the normal congruence of a given surface.
//
// The second fundamental form is taken with respect to the normal pointing
// along the oriented geodesic (increasing r), so that horospheres have both
// principal curvatures equal to 1.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lh3/congruence.hpp"
#include "lh3/induced_geometry.hpp"

namespace lh3 {

// d r as a series (order one below the jet) from
//   2 d r = mu2/(1 + conj(mu1) mu2) (d conj(mu1) + d mu2 / mu2^2)
//         + conj(mu2)/(1 + mu1 conj(mu2)) (d mu1 + d conj(mu2) / conj(mu2)^2).
Series support_differential(const ChartJet& jet);

// Local expansion of r at a point where r = r0 (order of the jet).
Series r_series(const ChartJet& jet, double r0);

struct RField {
  Grid grid;
  std::vector<double> values;  // NaN at inactive nodes
  cd nu0 = 0.0;
  double r0 = 0.0;
  double closedness = 0.0;  // largest plaquette circulation
  double curl = 0.0;        // largest relative support_curl over the nodes

  double at(int i, int j) const { return values[grid.index(i, j)]; }
};

// Largest circulation of the r-form around grid plaquettes.  Edges use the
// two-point Hermite rule with as many slope derivatives as the chart jets
// provide (order 12 for closed-form charts, 4 for numeric ones).
double closedness_residual(const CongruenceChart& chart, const Grid& grid);

// d_u(d_v r) - d_v(d_u r) at a point, from the local expansion, relative to
// max(1, |d_u r| + |d_v r|).  Zero exactly on Lagrangian charts.
double support_curl(const CongruenceChart& chart, cd nu);

// Relative curl above which a chart is rejected as not Lagrangian.
inline constexpr double kCurlTolerance = 1e-7;

// Integrates r along the row through nu0, then along columns (nodes not
// reached that way are filled by a breadth-first sweep).  Throws
// NotLagrangian when the curl at some active node exceeds kCurlTolerance;
// the plaquette circulation is reported but, being limited by the edge
// quadrature on coarse grids, does not decide.
RField integrate_r(const CongruenceChart& chart, const Grid& grid, cd nu0,
                   double r0);

struct SurfaceSample {
  bool valid = false;  // false at inactive nodes and focal points
  cd nu = 0.0;
  double r = 0.0;
  UpperHalfPoint point;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double kappa = 0.0;
  cd rho = 0.0;
  cd sigma = 0.0;
  double orthogonality = 0.0;  // |cos| of the angle between tangents and e0
};

struct SurfaceSamples {
  Grid grid;
  std::vector<SurfaceSample> samples;

  const SurfaceSample& at(int i, int j) const {
    return samples[grid.index(i, j)];
  }
};

SurfaceSamples reconstruct_surface(const CongruenceChart& chart,
                                   const RField& rf);

// lambda1 = -rho + |sigma| >= lambda2 = -rho - |sigma|.  Throws
// NotLagrangian when the twist is not negligible.
std::pair<double, double> principal_curvatures(const OpticalScalars& s);

struct SurfaceKappa {
  double formula = 0.0;      // 8/Delta [J_{21b}/cb^2 + J_{12b}/c^2]
  double from_scalars = 0.0; // |rho|^2 - |sigma|^2 - 1
};

SurfaceKappa surface_kappa(const CongruenceChart& chart, cd nu, double r);

// Normalized coefficient of dH ^ dP, H = lambda1 + lambda2 and
// P = lambda1 lambda2, at an interior node from sixth-order differences:
// |J| / (max(|grad H|, fh) max(|grad P|, fp)), where the floors are
// kDefectGradientFloor times the largest |H| (resp. |P|, at least 1).  It
// vanishes exactly where lambda1 and lambda2 are functionally related.
// Returns nullopt when the stencil leaves the valid samples.
inline constexpr double kDefectGradientFloor = 1e-4;

struct DefectSample {
  double raw = 0.0;         // H_u P_v - H_v P_u
  double grad_h = 0.0;
  double grad_p = 0.0;
  double grad_product = 0.0;
};
std::optional<DefectSample> weingarten_defect_raw(const SurfaceSamples& s,
                                                  int i, int j);
std::vector<double> weingarten_defect(const SurfaceSamples& s);

// d(|sigma|^2/kappa^2) ^ d((rho+1)/kappa) against factor K dmu1 ^ dmu1bar.
struct WedgeIdentity {
  cd lhs = 0.0;             // coefficient of dmu1 ^ dmu1bar
  double K = 0.0;
  cd factor = 0.0;          // -|mu2|^2 |s0|^4 / (2i e^{2r} rho0^4 |c|^2)
  cd factor_printed = 0.0;  // |mu2|^2 |s0|^4 / (2i e^{2r} rho0^4 |c|^3)
  double residual = 0.0;    // |lhs/factor - K| / max(1, |K|)
  cd printed_ratio = 0.0;   // lhs / (factor_printed K)
};

// Throws FlatPoint when |kappa| <= 1e-9.
WedgeIdentity wedge_identity(const CongruenceChart& chart, cd nu, double r);

// A parameterized surface: given nu as a series, returns t and z as series.
struct SurfacePatch {
  Series t;
  Series z;
};
using Immersion = std::function<SurfacePatch(const Series& nu)>;

struct NormalCongruence {
  std::shared_ptr<FunctionChart> chart;
  Immersion immersion;

  UpperHalfPoint point(cd nu) const;
  // Parameter along the normal geodesic at which it meets the surface.
  double r_at(cd nu) const;
};

// Normal n = X_u x X_v in (x0, x1, x2) order.  Chart evaluation throws
// ChartSingular when the normal geodesic is vertical or ends at infinity.
NormalCongruence normal_congruence_of_surface(Immersion immersion,
                                              Domain domain,
                                              std::string name = "normal");

struct TheoremSample {
  cd nu = 0.0;
  bool has_K = false;
  double K = 0.0;
  bool has_defect = false;
  double defect = 0.0;
  bool has_wedge = false;
  double wedge_residual = 0.0;
  double kappa = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  // (lambda1^2 - 1)(lambda2^2 - 1) / ((lambda1^2 + 1)(lambda2^2 + 1))
  double rank1_product = 0.0;
  int rank = 0;
};

struct TheoremReport {
  std::vector<TheoremSample> samples;
  double max_K = 0.0;
  double max_defect = 0.0;
  double max_wedge_residual = 0.0;
  double max_rank1_product = 0.0;
  std::size_t flat_points = 0;
  std::size_t degenerate_points = 0;
  std::size_t focal_points = 0;  // Delta = 0 on the reconstructed surface
  bool scalar_flat = false;  // max |K| <= tol_K
  bool weingarten = false;   // max defect <= tol_defect
  bool consistent = false;   // scalar_flat == weingarten
};

// Samples with |sigma|^2 <= band * max(1, |rho|^2) sit next to an umbilic,
// where the induced metric vanishes; they are reported as degenerate rather
// than used for K.
inline constexpr double kTheoremDegenerateBand = 1e-6;

TheoremReport main_theorem_check(const CongruenceChart& chart, const Grid& grid,
                                 cd nu0, double r0, double tol_K = 1e-5,
                                 double tol_defect = 1e-4);

}  // namespace lh3
