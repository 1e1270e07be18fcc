#include "shrinklab/obstruction.hpp"

#include "shrinklab/gauss.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace shrinklab::obstruction {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Sparse polynomial in y_1..y_dim: exponent vector -> coefficient.
using Poly = std::map<std::vector<int>, double>;

Poly poly_mul(const Poly& f, const Poly& g) {
  Poly out;
  for (const auto& [ef, cf] : f) {
    for (const auto& [eg, cg] : g) {
      std::vector<int> e(ef.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ef[i] + eg[i];
      out[e] += cf * cg;
    }
  }
  return out;
}

}  // namespace

QuadCoeffs::QuadCoeffs(Eigen::MatrixXd m) : a(std::move(m)) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("QuadCoeffs: matrix must be square and non-empty");
  }
  a = 0.5 * (a + a.transpose().eval());  // stored symmetric exactly
}

CrossSectionInvariants sphere_cross_section(int k, int linear_dims) {
  if (k < 1 || linear_dims < 1) {
    throw std::invalid_argument("sphere_cross_section: k, linear_dims must be >= 1");
  }
  // |S^k_r| = 2 pi^{(k+1)/2} / Gamma((k+1)/2) * r^k; Gaussian area multiplies
  // by (4 pi)^{-k/2} exp(-r^2/4) with r = sqrt(2k).
  const double r = std::sqrt(2.0 * k);
  const double area_unit = 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
  const double area = area_unit * std::pow(r, k);
  const double lambda = std::pow(4.0 * kPi, -0.5 * k) * std::exp(-k / 2.0) * area;

  CrossSectionInvariants inv;
  inv.lambda = lambda;
  inv.B1 = -lambda / (8.0 * k * k);
  inv.k = k;
  inv.n = k + linear_dims;
  inv.m = 1;
  return inv;
}

double jacobi_norm(const QuadCoeffs& coeffs, const CrossSectionInvariants& inv) {
  if (inv.lambda <= 0.0) throw std::invalid_argument("lambda must be > 0");
  return 8.0 * inv.lambda * coeffs.sum_squares();
}

double quadratic_projection_closedform(const QuadCoeffs& coeffs, int b,
                                       const CrossSectionInvariants& inv) {
  if (b < 0 || b >= coeffs.dim()) throw std::out_of_range("row index b out of range");
  return 128.0 * inv.B1 * coeffs.row_sum_squares(b);
}

double quadratic_projection_bruteforce(const QuadCoeffs& coeffs, int b) {
  const int dim = coeffs.dim();
  if (b < 0 || b >= dim) throw std::out_of_range("row index b out of range");
  if (dim > 6) {
    throw std::invalid_argument("bruteforce expansion limited to dim <= 6");
  }

  // u = sum_{ij} a_ij y_i y_j - 2 * trace(a)
  Poly u;
  const std::vector<int> zero(static_cast<size_t>(dim), 0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      std::vector<int> e = zero;
      e[static_cast<size_t>(i)] += 1;
      e[static_cast<size_t>(j)] += 1;
      u[e] += coeffs.a(i, j);
    }
  }
  u[zero] += -2.0 * coeffs.a.trace();

  Poly factor;
  std::vector<int> eb = zero;
  eb[static_cast<size_t>(b)] = 2;
  factor[eb] = 1.0;
  factor[zero] = -2.0;

  const Poly integrand = poly_mul(poly_mul(u, u), factor);

  double total = 0.0;
  for (const auto& [e, c] : integrand) {
    if (c == 0.0) continue;
    total += c * gauss::gaussian_moment(gauss::MultiIndex(e));
  }
  return total;
}

LowerBound obstruction_lower_bound(const QuadCoeffs& coeffs,
                                   const CrossSectionInvariants& inv) {
  if (inv.lambda <= 0.0) throw std::invalid_argument("lambda must be > 0");
  if (inv.B1 == 0.0) throw std::invalid_argument("B1 must be nonzero");
  if (coeffs.dim() != inv.linear_dims()) {
    throw std::invalid_argument("coefficient dimension must equal n - k");
  }
  if (coeffs.sum_squares() == 0.0) {
    throw std::invalid_argument("degenerate input: zero coefficient matrix");
  }

  const int dim = coeffs.dim();
  // Basis vectors (y_b^2 - 2) H are orthogonal with squared norm 8 lambda.
  double proj_sq = 0.0;
  for (int b = 0; b < dim; ++b) {
    const double p = quadratic_projection_closedform(coeffs, b, inv);
    proj_sq += p * p;
  }
  LowerBound out;
  out.lhs = std::sqrt(proj_sq / (8.0 * inv.lambda));
  out.delta = 128.0 * std::fabs(inv.B1) /
              std::sqrt(512.0 * dim * inv.lambda * inv.lambda * inv.lambda);
  out.rhs = out.delta * jacobi_norm(coeffs, inv);
  return out;
}

}  // namespace shrinklab::obstruction
