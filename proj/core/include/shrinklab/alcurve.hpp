#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

// Closed planar shrinker curves for curve shortening flow: the round circle
// and the closed convex immersed curves whose curvature solves
//     kappa'' - kappa'^2/kappa + kappa^3 = kappa/2.
// The ODE is integrated in w = ln kappa, where it becomes the separable
// Hamiltonian system w'' = 1/2 - e^{2w} with energy
//     E = w'^2/2 + e^{2w}/2 - w/2
//       = kappa'^2/(2 kappa^2) + kappa^2/2 - ln(kappa)/2.
//
// Frame convention: tangent angle theta with d(theta)/d(sigma) = kappa > 0,
// T = (cos theta, sin theta), N = (sin theta, -cos theta), so T' = -kappa N,
// N' = kappa T, the mean curvature vector is kappa N, and a shrinker satisfies
// <x,N> = 2 kappa and <x,T> = 2 kappa'/kappa.

namespace shrinklab::alcurve {

using Eigen::ArrayXd;
using Eigen::ArrayX2d;

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kCircleKappa = 0.70710678118654752440;  // 1/sqrt(2)

struct IntegrationError : std::runtime_error {
  double sigma;
  IntegrationError(const std::string& what, double s)
      : std::runtime_error(what), sigma(s) {}
};

struct SearchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClosureError : std::runtime_error {
  double angular_defect;
  ClosureError(const std::string& what, double defect)
      : std::runtime_error(what), angular_defect(defect) {}
};

struct OdeOptions {
  double max_substep = 1e-3;  // step bound for the 4th-order symplectic scheme
};

struct CurvatureProfile {
  ArrayXd sigma;      // uniform arclength samples, spacing h
  ArrayXd kappa;      // > 0 everywhere
  ArrayXd kappa_dot;
  double h = 0.0;
  double length = 0.0;          // integration span (= closed length when closed)
  double period = 0.0;          // one kappa oscillation; full length for the circle
  double first_integral = 0.0;  // E evaluated at the initial sample
  double first_integral_drift = 0.0;  // max relative drift over the run
  int p = 0, q = 0;             // rotation index / oscillation count (closure search)
  double kappa_max = 0.0;
  bool is_circle = false;
};

struct ClosedCurve {
  ArrayXd sigma;
  ArrayX2d position;
  ArrayX2d tangent;
  ArrayX2d normal;
  ArrayXd kappa;
  ArrayXd kappa_dot;
  ArrayXd rho;  // (4 pi)^{-1/2} exp(-|x|^2/4)
  double h = 0.0;
  double length = 0.0;
  double weight_constant = 0.0;          // c with rho * kappa = c
  double weight_constant_rel_var = 0.0;  // max |rho*kappa/c - 1|
  double closure_defect = 0.0;           // |x(L) - x(0)|
  double shrinker_residual = 0.0;        // max |<x,N>/2 - kappa|
  double total_turning = 0.0;
  int rotation_index = 0;
  int p = 0, q = 0;
  double kappa_max = 0.0;

  Eigen::Index size() const { return sigma.size(); }
  // L2 inner product weighted by rho against arclength measure.
  double inner(const ArrayXd& f, const ArrayXd& g) const {
    return (f * g * rho).sum() * h;
  }
  double norm(const ArrayXd& f) const { return std::sqrt(inner(f, f)); }
};

// E(kappa, kappa_dot); conserved along the curvature ODE.
double first_integral(double kappa, double kappa_dot);

// Integrate from kappa(0) = kappa0, kappa'(0) = 0 over `steps` samples of
// spacing h (internal substeps keep the energy drift near round-off).
CurvatureProfile integrate_curvature_ode(double kappa0, int steps, double h,
                                         const OdeOptions& opts = {});

// Tangent-angle advance over one half oscillation minus pi*p/q, as a function
// of the curvature maximum. Roots give curves closing after q oscillations
// with rotation index p. Requires kappa_max > 1/sqrt(2).
double closure_function(int p, int q, double kappa_max, const OdeOptions& opts = {});

// Shooting solve: locate the closure root inside `bracket` (scanned for a
// sign change first) and return the profile sampled on `grid` uniform points
// over the full closed length. (1,1) returns the circle profile.
CurvatureProfile find_closed_curve(int p, int q, std::pair<double, double> bracket,
                                   int grid = 512, const OdeOptions& opts = {});

// Frenet reconstruction by spectral antidifferentiation of the profile,
// anchored so the identity x = (2 kappa'/kappa) T + 2 kappa N holds at the
// first sample. Closure defect and shrinker residual are reported, not hidden.
ClosedCurve reconstruct_curve(const CurvatureProfile& profile);

// Analytic circle of the given radius (a shrinker only for radius sqrt(2)).
ClosedCurve make_circle(double radius = kSqrt2, int grid = 512);

struct B1Routes {
  double route_a;  // -int (kappa^6 - 3 kappa^2 kappa'^2) rho dsigma
  double route_b;  // -c int (kappa^5 - 3 kappa kappa'^2) dsigma
  double route_c;  // -(c/2) int kappa^3 dsigma
};
B1Routes compute_B1(const ClosedCurve& curve);

struct IdentityPair {
  double lhs;
  double rhs;
};
// Unweighted closed-curve identities: for n >= 1,
//   int kappa'' kappa^n = -n int kappa'^2 kappa^{n-1},
// and for n >= 2 (using the curvature ODE),
//   -n int kappa'^2 kappa^{n-2} = int (kappa^n/2 - kappa^{n+2}).
std::pair<IdentityPair, IdentityPair> integration_identity_check(
    const ClosedCurve& curve, int n);

double gaussian_area(const ClosedCurve& curve);

// Residual of the curvature ODE evaluated spectrally on the sampled profile.
double ode_residual(const ClosedCurve& curve);

// CSV with a JSON header line; columns sigma,x1,x2,kappa,kappa_dot,rho.
void write_curve_csv(const ClosedCurve& curve, const std::string& path);
ClosedCurve read_curve_csv(const std::string& path);

}  // namespace shrinklab::alcurve
