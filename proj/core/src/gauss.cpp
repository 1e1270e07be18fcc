#include "shrinklab/gauss.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shrinklab::gauss {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

int MultiIndex::degree() const {
  int d = 0;
  for (int e : entries) d += e;
  return d;
}

bool MultiIndex::all_even() const {
  for (int e : entries) {
    if (e % 2 != 0) return false;
  }
  return true;
}

void MultiIndex::validate() const {
  if (entries.empty()) throw std::invalid_argument("multi-index must have >= 1 entry");
  for (int e : entries) {
    if (e < 0) throw std::invalid_argument("multi-index entries must be >= 0");
  }
}

std::int64_t gaussian_moment_exact(const MultiIndex& alpha) {
  alpha.validate();
  if (!alpha.all_even()) return 0;
  // Gamma((2b+1)/2) = (2b)!/(4^b b!) sqrt(pi), so the closed form
  // pi^{-m/2} 2^{|alpha|} prod Gamma((a_i+1)/2) reduces to prod (2b_i)!/b_i!,
  // the rising product (b_i+1)(b_i+2)...(2b_i).
  std::int64_t result = 1;
  for (int e : alpha.entries) {
    const int b = e / 2;
    for (int t = b + 1; t <= 2 * b; ++t) {
      if (result > std::numeric_limits<std::int64_t>::max() / t) {
        throw std::overflow_error("gaussian_moment_exact: degree too large");
      }
      result *= t;
    }
  }
  return result;
}

double gaussian_moment(const MultiIndex& alpha) {
  if (!alpha.all_even()) return 0.0;
  return static_cast<double>(gaussian_moment_exact(alpha));
}

QuadratureRule gauss_hermite_rule(int dimension, int points_per_dim) {
  if (dimension < 1 || dimension > 6) {
    throw std::invalid_argument("gauss_hermite_rule: dimension must be in [1, 6]");
  }
  if (points_per_dim < 1) throw std::invalid_argument("points_per_dim must be >= 1");

  // Golub-Welsch for weight exp(-t^2): Jacobi matrix has zero diagonal and
  // off-diagonal sqrt(i/2); weights are sqrt(pi) * (first eigenvector row)^2.
  const int m = points_per_dim;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) {
    const double b = std::sqrt(static_cast<double>(i) / 2.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermite node solve failed");

  ArrayXd t = es.eigenvalues().array();
  ArrayXd w1(m);
  for (int i = 0; i < m; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    w1[i] = v0 * v0;  // normalized weights for rho_1 (sqrt(pi) cancels)
  }

  // Rescale t -> 2t so the weight becomes exp(-y^2/4); with the (4 pi)^{-1/2}
  // normalization the 1-d weights already sum to 1.
  ArrayXd y1 = 2.0 * t;

  QuadratureRule rule;
  rule.dimension = dimension;
  rule.exact_degree = 2 * m - 1;
  const int total = static_cast<int>(std::pow(static_cast<double>(m), dimension));
  rule.nodes.assign(static_cast<size_t>(dimension), ArrayXd(total));
  rule.weights = ArrayXd::Ones(total);
  for (int p = 0; p < total; ++p) {
    int rem = p;
    for (int d = dimension - 1; d >= 0; --d) {
      const int idx = rem % m;
      rem /= m;
      rule.nodes[static_cast<size_t>(d)][p] = y1[idx];
      rule.weights[p] *= w1[idx];
    }
  }
  return rule;
}

double QuadratureRule::integrate_monomial(const MultiIndex& alpha) const {
  ArrayXd f = weights;
  for (int d = 0; d < dimension; ++d) {
    const int e = alpha.entries[static_cast<size_t>(d)];
    if (e == 0) continue;
    f *= nodes[static_cast<size_t>(d)].pow(e);
  }
  return f.sum();
}

double moment_by_quadrature(const MultiIndex& alpha, const QuadratureRule& rule) {
  alpha.validate();
  if (alpha.dimension() != rule.dimension) {
    throw std::invalid_argument("moment_by_quadrature: dimension mismatch");
  }
  if (alpha.degree() > rule.exact_degree) {
    throw std::invalid_argument(
        "moment_by_quadrature: rule degree insufficient for |alpha|");
  }
  return rule.integrate_monomial(alpha);
}

namespace {

// Regularized incomplete gamma, series for the lower part (x < s+1).
double lower_regularized_series(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Regularized upper part via modified Lentz continued fraction (x >= s+1).
double upper_regularized_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-17) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

double upper_incomplete_gamma(double s, double x) {
  if (s <= 0.0 || x < 0.0) throw std::invalid_argument("upper_incomplete_gamma domain");
  if (x == 0.0) return std::tgamma(s);
  const double q = (x < s + 1.0) ? 1.0 - lower_regularized_series(s, x)
                                 : upper_regularized_cf(s, x);
  return q * std::tgamma(s);
}

double cutoff_tail(int n, int m, double R) {
  if (n < 1) throw std::invalid_argument("cutoff_tail: n must be >= 1");
  if (m < 0) throw std::invalid_argument("cutoff_tail: m must be >= 0");
  if (R < 1.0) throw std::domain_error("cutoff_tail: requires R >= 1");
  // Radially: area(S^{n-1}) * int_R^inf r^{m+n-1} exp(-r^2/4) dr
  //         = area(S^{n-1}) * 2^{m+n-1} * Gamma((m+n)/2, R^2/4).
  const double area = 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
  const double s = 0.5 * (m + n);
  return area * std::pow(2.0, m + n - 1) * upper_incomplete_gamma(s, R * R / 4.0);
}

double cutoff_tail_ratio(int n, int m, double R) {
  return cutoff_tail(n, m, R) / (std::pow(R, n + m + 2) * std::exp(-R * R / 4.0));
}

PoincarePair gaussian_poincare_check(const SampledFunction& u, int codim) {
  const auto dim = static_cast<int>(u.axes.size());
  if (dim < 1 || dim > 3) throw std::invalid_argument("poincare check: 1 <= dim <= 3");
  if (codim < 1) throw std::invalid_argument("poincare check: codim must be >= 1");
  if (u.gradient.size() != u.axes.size()) {
    throw std::invalid_argument("poincare check: gradient must have one field per axis");
  }

  Eigen::Index total = 1;
  for (const auto& ax : u.axes) {
    if (ax.size() < 2) throw std::invalid_argument("poincare check: axis too short");
    total *= ax.size();
  }
  if (u.values.size() != total) {
    throw std::invalid_argument("poincare check: values do not match the grid");
  }
  for (const auto& g : u.gradient) {
    if (g.size() != total) {
      throw std::invalid_argument("poincare check: gradient does not match the grid");
    }
  }

  // Tensor trapezoid against rho_dim evaluated at the nodes.
  std::vector<double> h(static_cast<size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    const ArrayXd& ax = u.axes[static_cast<size_t>(d)];
    h[static_cast<size_t>(d)] = ax[1] - ax[0];
  }

  double lhs = 0.0, rhs = 0.0;
  const double norm = std::pow(4.0 * kPi, -0.5 * dim);
  for (Eigen::Index p = 0; p < total; ++p) {
    Eigen::Index rem = p;
    double y2 = 0.0;
    double wt = 1.0;
    for (int d = dim - 1; d >= 0; --d) {
      const ArrayXd& ax = u.axes[static_cast<size_t>(d)];
      const Eigen::Index idx = rem % ax.size();
      rem /= ax.size();
      const double y = ax[idx];
      y2 += y * y;
      double w = h[static_cast<size_t>(d)];
      if (idx == 0 || idx == ax.size() - 1) w *= 0.5;
      wt *= w;
    }
    const double rho = norm * std::exp(-y2 / 4.0) * wt;
    const double uv = u.values[p];
    double grad2 = 0.0;
    for (const auto& g : u.gradient) grad2 += g[p] * g[p];
    lhs += 0.25 * uv * uv * y2 * rho;
    rhs += (static_cast<double>(codim) * uv * uv + 4.0 * grad2) * rho;
  }
  return {lhs, rhs};
}

}  // namespace shrinklab::gauss
