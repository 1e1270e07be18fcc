#include "shrinklab/spectral.hpp"

#include "shrinklab/fourier.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shrinklab::spectral {

namespace {

using Eigen::VectorXd;

struct SymmetrizedOperator {
  MatrixXd s;         // P^{1/2} M P^{-1/2}, exactly symmetric
  ArrayXd sqrt_rho;
  ArrayXd nyquist;    // normalized P^{1/2} (-1)^j, exact null of the flux part
};

SymmetrizedOperator build_symmetrized(const alcurve::ClosedCurve& curve,
                                      OperatorKind kind) {
  const auto n = static_cast<int>(curve.size());
  const MatrixXd d = fourier::diff_matrix(n, curve.length);

  SymmetrizedOperator out;
  out.sqrt_rho = curve.rho.sqrt();

  // B = P^{-1/2} D P^{1/2}; the flux form is -B B^T.
  MatrixXd b = d;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      b(j, k) *= out.sqrt_rho[k] / out.sqrt_rho[j];
    }
  }
  out.s.noalias() = -(b * b.transpose());
  out.s = 0.5 * (out.s + out.s.transpose().eval());
  if (kind == OperatorKind::jacobi) {
    out.s.diagonal().array() += curve.kappa.square() + 0.5;
  }

  out.nyquist = ArrayXd(n);
  for (int j = 0; j < n; ++j) {
    out.nyquist[j] = ((j % 2 == 0) ? 1.0 : -1.0) * out.sqrt_rho[j];
  }
  out.nyquist /= std::sqrt(out.nyquist.square().sum());
  return out;
}

}  // namespace

double DiscreteOperator::weighted_symmetry_defect() const {
  const auto n = matrix.rows();
  double defect = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      defect = std::max(defect,
                        std::fabs(weight[j] * matrix(j, k) - weight[k] * matrix(k, j)));
    }
  }
  return defect;
}

DiscreteOperator build_operator(const alcurve::ClosedCurve& curve, OperatorKind kind) {
  const auto n = static_cast<int>(curve.size());
  const double dev = (curve.sigma.tail(n - 1) - curve.sigma.head(n - 1) - curve.h)
                         .abs()
                         .maxCoeff();
  if (dev > 1e-9 * curve.h) {
    throw std::invalid_argument("build_operator: grid must be uniform");
  }
  if ((curve.kappa <= 0.0).any()) {
    throw std::invalid_argument("build_operator: kappa must be positive");
  }

  const SymmetrizedOperator sym = build_symmetrized(curve, kind);

  DiscreteOperator op;
  op.kind = kind;
  op.kappa = curve.kappa;
  op.rho = curve.rho;
  op.length = curve.length;
  op.h = curve.h;
  op.weight = curve.rho * curve.h;
  op.matrix = sym.s;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      op.matrix(j, k) *= sym.sqrt_rho[k] / sym.sqrt_rho[j];
    }
  }
  return op;
}

std::vector<EigenPair> eigensolve(const DiscreteOperator& op, int count) {
  const auto n = static_cast<int>(op.matrix.rows());
  if (count < 1 || count > n - 1) {
    throw std::invalid_argument("eigensolve: count must be in [1, n-1]");
  }

  // Rebuild the symmetric form and deflate the weighted Nyquist direction
  // with a Householder reflection.
  ArrayXd sqrt_rho = op.rho.sqrt();
  MatrixXd s = op.matrix;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      s(j, k) *= sqrt_rho[j] / sqrt_rho[k];
    }
  }
  s = 0.5 * (s + s.transpose().eval());

  VectorXd z(n);
  for (int j = 0; j < n; ++j) z[j] = ((j % 2 == 0) ? 1.0 : -1.0) * sqrt_rho[j];
  z.normalize();

  VectorXd u = z;
  u[n - 1] += (z[n - 1] >= 0.0 ? 1.0 : -1.0);
  u.normalize();
  MatrixXd hh = MatrixXd::Identity(n, n) - 2.0 * u * u.transpose();
  // hh maps z to -/+ e_{n-1}; the first n-1 columns span the complement of z.
  MatrixXd q = hh.leftCols(n - 1);

  MatrixXd s_defl = q.transpose() * s * q;
  s_defl = 0.5 * (s_defl + s_defl.transpose().eval());

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s_defl);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigensolve: dense symmetric solver failed to converge");
  }

  std::vector<EigenPair> pairs(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int src = n - 2 - i;  // ascending -> descending
    EigenPair& pr = pairs[static_cast<size_t>(i)];
    pr.eigenvalue = es.eigenvalues()[src];
    VectorXd psi_tilde = q * es.eigenvectors().col(src);
    ArrayXd psi = psi_tilde.array() / sqrt_rho;
    const double nrm = std::sqrt((psi.square() * op.weight).sum());
    psi /= nrm;
    // deterministic sign
    Eigen::Index imax = 0;
    psi.abs().maxCoeff(&imax);
    if (psi[imax] < 0.0) psi = -psi;
    pr.eigenfunction = psi;
    const ArrayXd res = op.apply(psi) - pr.eigenvalue * psi;
    pr.residual = std::sqrt((res.square() * op.weight).sum());
  }
  return pairs;
}

std::vector<EigenCluster> cluster_eigenvalues(const std::vector<EigenPair>& pairs,
                                              double gap_rel) {
  std::vector<EigenCluster> clusters;
  if (pairs.empty()) return clusters;
  double lo = pairs.front().eigenvalue, hi = lo;
  for (const auto& p : pairs) {
    lo = std::min(lo, p.eigenvalue);
    hi = std::max(hi, p.eigenvalue);
  }
  const double gap = std::max(gap_rel * std::max(hi - lo, 1.0), 1e-12);

  EigenCluster cur{pairs[0].eigenvalue, 1, 0};
  double sum = pairs[0].eigenvalue;
  for (size_t i = 1; i < pairs.size(); ++i) {
    if (std::fabs(pairs[i].eigenvalue - pairs[i - 1].eigenvalue) <= gap) {
      cur.multiplicity += 1;
      sum += pairs[i].eigenvalue;
    } else {
      cur.value = sum / cur.multiplicity;
      clusters.push_back(cur);
      cur = EigenCluster{pairs[i].eigenvalue, 1, static_cast<int>(i)};
      sum = pairs[i].eigenvalue;
    }
  }
  cur.value = sum / cur.multiplicity;
  clusters.push_back(cur);
  return clusters;
}

ArrayXd apply_drift(const alcurve::ClosedCurve& curve, const ArrayXd& u) {
  const ArrayXd du = fourier::derivative(u, curve.length);
  return fourier::derivative(curve.rho * du, curve.length) / curve.rho;
}

ArrayXd apply_jacobi(const alcurve::ClosedCurve& curve, const ArrayXd& u) {
  return apply_drift(curve, u) + (curve.kappa.square() + 0.5) * u;
}

namespace {

void refuse_non_shrinker(const alcurve::ClosedCurve& curve, double tol,
                         const char* where) {
  if (curve.shrinker_residual > tol) {
    throw std::invalid_argument(std::string(where) +
                                ": input is not a shrinker (residual " +
                                std::to_string(curve.shrinker_residual) + ")");
  }
}

int multiplicity_at(const std::vector<EigenPair>& pairs, double target, double tol) {
  int m = 0;
  for (const auto& p : pairs) {
    if (std::fabs(p.eigenvalue - target) <= tol) ++m;
  }
  return m;
}

bool is_constant_kappa(const alcurve::ClosedCurve& curve) {
  const double mean = curve.kappa.mean();
  return (curve.kappa - mean).abs().maxCoeff() < 1e-10 * mean;
}

}  // namespace

double subspace_angle(const ArrayXd& weight, const ArrayXd& a1, const ArrayXd& a2,
                      const ArrayXd& b1, const ArrayXd& b2) {
  const ArrayXd sw = weight.sqrt();
  MatrixXd a(a1.size(), 2), b(b1.size(), 2);
  a.col(0) = (a1 * sw).matrix();
  a.col(1) = (a2 * sw).matrix();
  b.col(0) = (b1 * sw).matrix();
  b.col(1) = (b2 * sw).matrix();
  const MatrixXd qa = Eigen::HouseholderQR<MatrixXd>(a).householderQ() *
                      MatrixXd::Identity(a.rows(), 2);
  const MatrixXd qb = Eigen::HouseholderQR<MatrixXd>(b).householderQ() *
                      MatrixXd::Identity(b.rows(), 2);
  Eigen::JacobiSVD<MatrixXd> svd(qa.transpose() * qb);
  const double smin = std::min(1.0, svd.singularValues().minCoeff());
  return std::acos(smin);
}

A1Report verify_A1(const alcurve::ClosedCurve& curve, const AssumptionOptions& opts) {
  refuse_non_shrinker(curve, opts.refuse_residual, "verify_A1");

  A1Report rep;
  const ArrayXd x1 = curve.position.col(0);
  const ArrayXd x2 = curve.position.col(1);
  rep.residual_x1 = curve.norm(apply_drift(curve, x1) + 0.5 * x1) / curve.norm(x1);
  rep.residual_x2 = curve.norm(apply_drift(curve, x2) + 0.5 * x2) / curve.norm(x2);

  const DiscreteOperator op = build_operator(curve, OperatorKind::drift_laplacian);
  const auto pairs = eigensolve(op, opts.eigen_count);
  rep.spectrum_head.reserve(static_cast<size_t>(opts.head));
  for (int i = 0; i < opts.head && i < static_cast<int>(pairs.size()); ++i) {
    rep.spectrum_head.push_back(pairs[static_cast<size_t>(i)].eigenvalue);
  }

  std::vector<const EigenPair*> half;
  for (const auto& p : pairs) {
    if (std::fabs(p.eigenvalue + 0.5) <= opts.cluster_tol) half.push_back(&p);
  }
  rep.half_cluster_dim = static_cast<int>(half.size());
  if (rep.half_cluster_dim == 2) {
    rep.subspace_angle = subspace_angle(op.weight, x1, x2, half[0]->eigenfunction,
                                        half[1]->eigenfunction);
  } else {
    rep.subspace_angle = std::numeric_limits<double>::quiet_NaN();
  }

  rep.pass = rep.residual_x1 <= opts.identity_tol &&
             rep.residual_x2 <= opts.identity_tol && rep.half_cluster_dim == 2 &&
             rep.subspace_angle <= opts.angle_tol;
  return rep;
}

A2Report verify_A2(const alcurve::ClosedCurve& curve, const AssumptionOptions& opts) {
  refuse_non_shrinker(curve, opts.refuse_residual, "verify_A2");

  A2Report rep;
  const ArrayXd k = curve.kappa;
  rep.res_dilation = curve.norm(apply_jacobi(curve, k) - k) / curve.norm(k);
  const ArrayXd n1 = curve.normal.col(0);
  const ArrayXd n2 = curve.normal.col(1);
  rep.res_translation_x1 = curve.norm(apply_jacobi(curve, n1) - 0.5 * n1) / curve.norm(n1);
  rep.res_translation_x2 = curve.norm(apply_jacobi(curve, n2) - 0.5 * n2) / curve.norm(n2);

  const bool circle = is_constant_kappa(curve);
  rep.rotation_applicable = !circle;
  if (!circle) {
    const ArrayXd rot = curve.kappa_dot / curve.kappa;
    rep.res_rotation = curve.norm(apply_jacobi(curve, rot)) / curve.norm(rot);
  }

  const DiscreteOperator op = build_operator(curve, OperatorKind::jacobi);
  const auto pairs = eigensolve(op, opts.eigen_count);
  rep.spectrum_head.reserve(static_cast<size_t>(opts.head));
  for (int i = 0; i < opts.head && i < static_cast<int>(pairs.size()); ++i) {
    rep.spectrum_head.push_back(pairs[static_cast<size_t>(i)].eigenvalue);
  }

  rep.mult_one = multiplicity_at(pairs, 1.0, opts.cluster_tol);
  rep.mult_half = multiplicity_at(pairs, 0.5, opts.cluster_tol);
  rep.mult_zero = multiplicity_at(pairs, 0.0, opts.cluster_tol);
  rep.nearest_to_zero = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) {
    rep.nearest_to_zero = std::min(rep.nearest_to_zero, std::fabs(p.eigenvalue));
  }

  rep.max_multiplicity = 0;
  for (const auto& c : cluster_eigenvalues(pairs)) {
    rep.max_multiplicity = std::max(rep.max_multiplicity, c.multiplicity);
  }

  const bool idents = rep.res_dilation <= opts.identity_tol &&
                      rep.res_translation_x1 <= opts.identity_tol &&
                      rep.res_translation_x2 <= opts.identity_tol &&
                      (!rep.rotation_applicable || rep.res_rotation <= opts.identity_tol);
  const bool mults = circle ? (rep.mult_one == 1 && rep.mult_half == 2 &&
                               rep.mult_zero == 0 && rep.nearest_to_zero > 0.1)
                            : (rep.mult_one == 1 && rep.mult_half == 2 &&
                               rep.mult_zero == 1);
  rep.pass = idents && mults && rep.max_multiplicity <= 2;
  return rep;
}

AssumptionReport verify_assumptions(const alcurve::ClosedCurve& curve,
                                    const AssumptionOptions& opts) {
  return {verify_A1(curve, opts), verify_A2(curve, opts)};
}

std::vector<double> sphere_spectrum(int k, int count) {
  if (k < 1) throw std::invalid_argument("sphere_spectrum: k must be >= 1");
  if (count < 1) throw std::invalid_argument("sphere_spectrum: count must be >= 1");
  std::vector<double> mu(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    mu[static_cast<size_t>(j)] =
        static_cast<double>(j) * static_cast<double>(j + k - 1) / (2.0 * k);
  }
  return mu;
}

}  // namespace shrinklab::spectral
