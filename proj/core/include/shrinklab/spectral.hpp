#pragma once

#include "shrinklab/alcurve.hpp"

#include <Eigen/Dense>
#include <vector>

// Discrete spectra of the drift Laplacian and the Jacobi operator on closed
// planar curves. On a curve the drift Laplacian acting on functions is
//     Ldrift u = u'' - <x,T>/2 u' = rho^{-1} (rho u')',
// and the Jacobi operator adds kappa^2 + 1/2 on the diagonal. The flux form
// rho^{-1} d(rho d.) is discretized with the spectral differentiation matrix,
// which keeps the operator self-adjoint in L2(rho) to round-off on any curve.

namespace shrinklab::spectral {

using Eigen::ArrayXd;
using Eigen::MatrixXd;

enum class OperatorKind { drift_laplacian, jacobi };

struct DiscreteOperator {
  OperatorKind kind = OperatorKind::drift_laplacian;
  MatrixXd matrix;   // acts on grid functions
  ArrayXd weight;    // rho * h, the L2(rho) quadrature weights
  ArrayXd kappa;
  ArrayXd rho;
  double length = 0.0;
  double h = 0.0;

  ArrayXd apply(const ArrayXd& f) const { return (matrix * f.matrix()).array(); }
  // max |WM - (WM)^T| over entries, W = diag(weight).
  double weighted_symmetry_defect() const;
};

struct EigenPair {
  double eigenvalue = 0.0;
  ArrayXd eigenfunction;  // unit L2(rho) norm
  double residual = 0.0;  // ||M psi - mu psi||_{L2(rho)}
};

struct EigenCluster {
  double value = 0.0;  // mean of the cluster
  int multiplicity = 0;
  int first_index = 0;  // into the descending eigenvalue list
};

DiscreteOperator build_operator(const alcurve::ClosedCurve& curve, OperatorKind kind);

// Top-of-spectrum eigenpairs (largest eigenvalues first). The weighted
// Nyquist direction, an exact null vector of the discrete flux form, is
// deflated before solving.
std::vector<EigenPair> eigensolve(const DiscreteOperator& op, int count);

// Group a descending eigenvalue list into clusters; gap_rel is relative to
// the spread of the supplied eigenvalues.
std::vector<EigenCluster> cluster_eigenvalues(const std::vector<EigenPair>& pairs,
                                              double gap_rel = 1e-6);

// Matrix-free applications (spectral differentiation via FFT).
ArrayXd apply_drift(const alcurve::ClosedCurve& curve, const ArrayXd& u);
ArrayXd apply_jacobi(const alcurve::ClosedCurve& curve, const ArrayXd& u);

struct AssumptionOptions {
  double refuse_residual = 1e-6;  // largest shrinker residual accepted
  double identity_tol = 1e-5;     // relative residual bound for the identities
  double angle_tol = 1e-5;
  double cluster_tol = 1e-5;  // window around the expected eigenvalues
  int head = 10;              // spectrum head length reported
  int eigen_count = 16;
};

struct A1Report {
  bool pass = false;
  double residual_x1 = 0.0, residual_x2 = 0.0;  // |Ldrift x_i + x_i/2| relative
  int half_cluster_dim = 0;                     // eigenvalue -1/2 cluster size
  double subspace_angle = 0.0;                  // to span{x1, x2}
  std::vector<double> spectrum_head;
};

struct A2Report {
  bool pass = false;
  double res_dilation = 0.0;     // |L kappa - kappa| relative
  double res_translation_x1 = 0.0, res_translation_x2 = 0.0;
  double res_rotation = 0.0;     // |L (kappa'/kappa)| relative
  bool rotation_applicable = false;  // false on the circle (kappa' == 0)
  int mult_one = 0, mult_half = 0, mult_zero = 0;
  double nearest_to_zero = 0.0;  // distance from 0 to the closest eigenvalue
  int max_multiplicity = 0;
  std::vector<double> spectrum_head;
};

struct AssumptionReport {
  A1Report a1;
  A2Report a2;
};

// Both refuse (throw std::invalid_argument) when the input is not a shrinker.
A1Report verify_A1(const alcurve::ClosedCurve& curve, const AssumptionOptions& opts = {});
A2Report verify_A2(const alcurve::ClosedCurve& curve, const AssumptionOptions& opts = {});
AssumptionReport verify_assumptions(const alcurve::ClosedCurve& curve,
                                    const AssumptionOptions& opts = {});

// Eigenvalues j (j + k - 1) / (2k), j = 0 .. count-1, of minus the Laplacian
// on the round k-sphere of radius sqrt(2k).
std::vector<double> sphere_spectrum(int k, int count);

// Largest principal angle between two 2-dimensional subspaces, in the inner
// product with the given weights.
double subspace_angle(const ArrayXd& weight, const ArrayXd& a1, const ArrayXd& a2,
                      const ArrayXd& b1, const ArrayXd& b2);

}  // namespace shrinklab::spectral
