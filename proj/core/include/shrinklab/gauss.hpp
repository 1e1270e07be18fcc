#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

// Calculus against the Gaussian weight rho_m(y) = (4 pi)^{-m/2} exp(-|y|^2/4):
// closed-form polynomial moments, tensorized Gauss-Hermite quadrature, the
// truncated-tail integral, and the weighted Poincare inequality check.

namespace shrinklab::gauss {

using Eigen::ArrayXd;

struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> e) : entries(e) { validate(); }
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) { validate(); }

  int degree() const;
  int dimension() const { return static_cast<int>(entries.size()); }
  bool all_even() const;
  void validate() const;  // throws std::invalid_argument on negative entries
};

// Tensorized quadrature rule for the weight rho_m, normalized so that the
// integral of 1 is exactly 1. Exact on polynomials up to exact_degree per axis.
struct QuadratureRule {
  int dimension = 0;
  int exact_degree = 0;
  std::vector<ArrayXd> nodes;  // nodes[i] is the i-th coordinate over all points
  ArrayXd weights;

  double integrate_monomial(const MultiIndex& alpha) const;
};

// Nodes/weights from the Golub-Welsch eigenvalue method, rescaled from
// weight exp(-t^2) to rho_1 by t -> 2t (exact up to degree 2*points-1).
QuadratureRule gauss_hermite_rule(int dimension, int points_per_dim);

// Moment of y^alpha against rho_m. Zero when any entry is odd; for even
// alpha = 2b the closed form collapses to the integer prod_i (2 b_i)!/b_i!.
double gaussian_moment(const MultiIndex& alpha);
std::int64_t gaussian_moment_exact(const MultiIndex& alpha);  // even alpha only

// Independent quadrature route; throws if the rule dimension mismatches or
// its declared degree is below |alpha|.
double moment_by_quadrature(const MultiIndex& alpha, const QuadratureRule& rule);

// integral over R^n minus the ball of radius R of |x|^m exp(-|x|^2/4) dx,
// reduced radially to an upper incomplete gamma value. Requires R >= 1.
double cutoff_tail(int n, int m, double R);

// cutoff_tail divided by R^{n+m+2} exp(-R^2/4); bounded in R on [1, 10].
double cutoff_tail_ratio(int n, int m, double R);

double upper_incomplete_gamma(double s, double x);

// Sampled function on a tensor grid (axes[i] uniform), values and per-axis
// gradient stored flattened row-major (last axis fastest).
struct SampledFunction {
  std::vector<ArrayXd> axes;
  ArrayXd values;
  std::vector<ArrayXd> gradient;
};

struct PoincarePair {
  double lhs;  // (1/4) int u^2 |y|^2 rho
  double rhs;  // int (codim u^2 + 4 |grad u|^2) rho
};

// Both sides of the Gaussian Poincare inequality for the linear directions of
// a cylinder with the given codimension; caller asserts lhs <= rhs.
PoincarePair gaussian_poincare_check(const SampledFunction& u, int codim);

}  // namespace shrinklab::gauss
