#pragma once

#include "shrinklab/alcurve.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

// Shrinker quantity and Gaussian area on perturbed curves. Perturbations move
// a base curve along its normal, x -> x + eps v N; the perturbed geometry is
// recomputed from positions by periodic spectral differentiation, so the
// finite-difference checks here are an oracle independent of the variation
// formulas they test. On a planar shrinker curve with V = v N:
//   first variation   phi_s      = L v,
//   second variation  (phi_ss)_N = -2 kappa (kappa^2 v^2 + v'^2 + 2 v v''),
//                     (phi_ss)_T = -2 (L v) v'.

namespace shrinklab::variation {

using alcurve::ClosedCurve;
using Eigen::ArrayX2d;
using Eigen::ArrayXd;

struct NormalField {
  ArrayXd values;
  ArrayXd dot;
  ArrayXd ddot;
  double second_derivative_consistency = 0.0;  // |D(Dv) - DDv| max

  static NormalField from_values(const ClosedCurve& base, const ArrayXd& v);
};

// Geometry of the graph x + eps v N, sampled over the base parameter grid.
struct PerturbedCurve {
  double epsilon = 0.0;
  ArrayX2d position;
  ArrayX2d tangent;
  ArrayX2d normal;
  ArrayXd speed;  // |dx/dt| against the base parameter
  ArrayXd kappa;
  ArrayXd rho;
  ArrayXd phi;  // <x,N>/2 - kappa on the perturbed curve
  double F = 0.0;
  double phi_l2 = 0.0;
  double phi_l1 = 0.0;

  static PerturbedCurve make(const ClosedCurve& base, const NormalField& v, double eps);
};

// Scalar field <x,N>/2 - kappa.
ArrayXd shrinker_quantity(const ClosedCurve& curve);

// Normal and tangential components of the second variation of the shrinker
// quantity along v N.
struct SecondVariationFields {
  ArrayXd normal;
  ArrayXd tangent;
};
SecondVariationFields second_variation_formula(const ClosedCurve& base,
                                               const NormalField& v);

struct ConvergenceReport {
  std::vector<double> eps;
  std::vector<double> residual;  // || phi(eps v)/eps - L v ||_{L2(rho)}
  double slope = 0.0;
  double limit_error = 0.0;  // Richardson-extrapolated derivative vs L v
  bool all_zero = false;
};
ConvergenceReport first_variation_check(const ClosedCurve& base, const NormalField& v,
                                        const std::vector<double>& eps_list);

struct SecondVariationReport {
  double normal_error = 0.0;   // extrapolated FD vs formula, L2(rho)
  double budget = 0.0;         // Richardson error estimate + floor
  double slope = 0.0;          // order of the FD residual in eps
  double tangent_error = 0.0;  // diagnostic only
  bool pass = false;
};
SecondVariationReport second_variation_check(const ClosedCurve& base,
                                             const NormalField& v,
                                             const std::vector<double>& eps_list);

struct TaylorReport {
  std::vector<double> eps;
  std::vector<double> remainder1;  // phi - eps L v
  std::vector<double> remainder2;  // phi - eps L v - eps^2/2 (second variation)
  double slope1 = 0.0;             // expected ~2
  double slope2 = 0.0;             // expected ~3
  bool resolved = true;            // spectral tail of v small enough to trust
  bool all_zero = false;
};
TaylorReport taylor_remainder_check(const ClosedCurve& base, const NormalField& v,
                                    const std::vector<double>& eps_list);

struct FExpansionReport {
  std::vector<double> eps;
  std::vector<double> gap;    // |F(eps) - F(0)|
  std::vector<double> bound;  // ||phi|| ||U|| + ||U||^3
  std::vector<double> fitted_c;
  double c_spread = 0.0;  // max/min - 1 over the fitted constants
};
FExpansionReport F_expansion_check(const ClosedCurve& base, const NormalField& v,
                                   const std::vector<double>& eps_list);

struct LojaSample {
  int direction = 0;
  double eps = 0.0;
  double phi_l2 = 0.0;
  double f_gap = 0.0;
};

struct LojaReport {
  std::vector<LojaSample> samples;
  double C = 0.0;                  // max f_gap / phi_l2^{3/2}
  double min_local_exponent = 0.0; // smallest per-direction log-log slope
  int excluded = 0;                // samples under the noise floor
  int directions = 0;
};

struct LojaOptions {
  int directions = 75;
  int eps_per_direction = 7;
  double amp_lo = 1e-4;
  double amp_hi = 1e-2;
  int max_mode = 8;
  std::uint64_t seed = 1;
  double noise_floor = 1e-12;
};
LojaReport lojasiewicz_gradient_check(const ClosedCurve& base, const LojaOptions& opts);

// Random smooth mode mixture used for ensemble directions, max-normalized.
ArrayXd random_direction(const ClosedCurve& base, int max_mode, std::uint64_t seed);

struct FunctionalReport {
  double phi_l1 = 0.0;
  double phi_l2 = 0.0;
  double F_value = 0.0;
  double F_gap = 0.0;
};
FunctionalReport functional_report(const ClosedCurve& base, const NormalField& v,
                                   double eps);

}  // namespace shrinklab::variation
