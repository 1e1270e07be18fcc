#pragma once

#include <Eigen/Dense>

// Second-order obstruction calculus on generalized cylinders over a compact
// cross-section. Jacobi fields orthogonal to rotations have the form
// u(y) H with u(y) = sum_{ij} a_ij (y_i y_j - 2 delta_ij), a symmetric; the
// quadratic form they induce projects onto the modes (y_b^2 - 2) H with
// coefficients 128 B1 sum_i a_bi^2, which a brute-force expansion into
// Gaussian moments reproduces as 2 B1 I with I = 64 sum_i a_bi^2.

namespace shrinklab::obstruction {

struct QuadCoeffs {
  Eigen::MatrixXd a;  // symmetric dim x dim

  explicit QuadCoeffs(Eigen::MatrixXd m);
  int dim() const { return static_cast<int>(a.rows()); }
  double sum_squares() const { return a.array().square().sum(); }
  double row_sum_squares(int b) const { return a.row(b).array().square().sum(); }
};

struct CrossSectionInvariants {
  double lambda = 0.0;  // Gaussian area of the cross-section
  double B1 = 0.0;
  int k = 0;  // cross-section dimension
  int n = 0;  // cylinder dimension; linear directions = n - k
  int m = 0;  // cross-section codimension

  int linear_dims() const { return n - k; }
};

// Analytic invariants of the round k-sphere cross-section of radius
// sqrt(2k): lambda its Gaussian area, B1 = -lambda / (8 k^2).
CrossSectionInvariants sphere_cross_section(int k, int linear_dims);

// ||u H||^2 = 8 lambda sum_{ij} a_ij^2 (ordered-pair summation).
double jacobi_norm(const QuadCoeffs& coeffs, const CrossSectionInvariants& inv);

// <quadratic form, (y_b^2-2) H> = 128 B1 sum_i a_bi^2.
double quadratic_projection_closedform(const QuadCoeffs& coeffs, int b,
                                       const CrossSectionInvariants& inv);

// I = integral of u^2 (y_b^2 - 2) against rho_{n-k}, expanded symbolically
// into monomials and summed with exact moments. dim <= 6.
double quadratic_projection_bruteforce(const QuadCoeffs& coeffs, int b);

struct LowerBound {
  double lhs;    // norm of the projection onto span{(y_b^2-2) H}
  double rhs;    // delta * ||u H||^2
  double delta;  // 128 |B1| / sqrt(8^3 (n-k) lambda^3)
};

// Throws std::invalid_argument on zero coefficients.
LowerBound obstruction_lower_bound(const QuadCoeffs& coeffs,
                                   const CrossSectionInvariants& inv);

}  // namespace shrinklab::obstruction
