#include "shrinklab/spectral.hpp"

#include "shrinklab/alcurve.hpp"

#include <doctest.h>

#include <cmath>

using namespace shrinklab;
using alcurve::kSqrt2;
using spectral::OperatorKind;

namespace {

alcurve::ClosedCurve al23(int grid) {
  return alcurve::reconstruct_curve(alcurve::find_closed_curve(2, 3, {0.72, 3.0}, grid));
}

}  // namespace

TEST_CASE("circle jacobi spectrum head is 1, 1/2 x2, -1 x2") {
  for (int grid : {128, 256, 512}) {
    const auto circle = alcurve::make_circle(kSqrt2, grid);
    const auto op = spectral::build_operator(circle, OperatorKind::jacobi);
    const auto pairs = spectral::eigensolve(op, 5);
    const double expected[5] = {1.0, 0.5, 0.5, -1.0, -1.0};
    for (int i = 0; i < 5; ++i) {
      CHECK(pairs[i].eigenvalue == doctest::Approx(expected[i]).epsilon(1e-10));
      CHECK(pairs[i].residual < 1e-9);
    }
  }
}

TEST_CASE("circle drift spectrum head is 0, -1/2 x2, -2 x2") {
  const auto circle = alcurve::make_circle(kSqrt2, 256);
  const auto op = spectral::build_operator(circle, OperatorKind::drift_laplacian);
  const auto pairs = spectral::eigensolve(op, 5);
  const double expected[5] = {0.0, -0.5, -0.5, -2.0, -2.0};
  for (int i = 0; i < 5; ++i) {
    CHECK(pairs[i].eigenvalue == doctest::Approx(expected[i]).epsilon(1e-10));
  }
}

TEST_CASE("drift operator annihilates constants") {
  for (const auto& curve :
       {alcurve::make_circle(kSqrt2, 128), alcurve::make_circle(1.3, 128), al23(256)}) {
    const auto op = spectral::build_operator(curve, OperatorKind::drift_laplacian);
    const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(curve.size());
    CHECK(op.apply(ones).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("weighted symmetry holds to round-off on any curve") {
  for (const auto& curve :
       {alcurve::make_circle(kSqrt2, 128), alcurve::make_circle(1.9, 128), al23(256)}) {
    for (auto kind : {OperatorKind::drift_laplacian, OperatorKind::jacobi}) {
      const auto op = spectral::build_operator(curve, kind);
      CHECK(op.weighted_symmetry_defect() < 1e-12);
    }
  }
}

TEST_CASE("operator build rejects non-uniform grids") {
  auto curve = alcurve::make_circle(kSqrt2, 128);
  curve.sigma[5] += 1e-3;
  CHECK_THROWS_AS(spectral::build_operator(curve, OperatorKind::jacobi),
                  std::invalid_argument);
}

TEST_CASE("eigenfunctions are orthonormal in the weighted inner product") {
  const auto curve = al23(256);
  const auto op = spectral::build_operator(curve, OperatorKind::jacobi);
  const auto pairs = spectral::eigensolve(op, 8);
  for (size_t i = 0; i < pairs.size(); ++i) {
    for (size_t j = i; j < pairs.size(); ++j) {
      const double ip =
          (pairs[i].eigenfunction * pairs[j].eigenfunction * op.weight).sum();
      if (i == j) {
        CHECK(ip == doctest::Approx(1.0).epsilon(1e-10));
      } else {
        CHECK(std::fabs(ip) < 1e-8);
      }
    }
  }
}

TEST_CASE("no eigenvalue cluster exceeds multiplicity two") {
  for (const auto& curve : {alcurve::make_circle(kSqrt2, 256), al23(512)}) {
    for (auto kind : {OperatorKind::drift_laplacian, OperatorKind::jacobi}) {
      const auto op = spectral::build_operator(curve, kind);
      const auto pairs = spectral::eigensolve(op, 12);
      for (const auto& c : spectral::cluster_eigenvalues(pairs)) {
        CHECK(c.multiplicity <= 2);
      }
    }
  }
}

TEST_CASE("eigenvalues are grid-converged") {
  const auto c1 = al23(256);
  const auto c2 = al23(512);
  const auto p1 =
      spectral::eigensolve(spectral::build_operator(c1, OperatorKind::jacobi), 6);
  const auto p2 =
      spectral::eigensolve(spectral::build_operator(c2, OperatorKind::jacobi), 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::fabs(p1[i].eigenvalue - p2[i].eigenvalue) < 1e-7);
  }
}

TEST_CASE("matrix-free applications match the matrices") {
  const auto curve = al23(256);
  const Eigen::ArrayXd u = curve.kappa * curve.sigma.sin();
  for (auto kind : {OperatorKind::drift_laplacian, OperatorKind::jacobi}) {
    const auto op = spectral::build_operator(curve, kind);
    const Eigen::ArrayXd via_matrix = op.apply(u);
    const Eigen::ArrayXd via_fft = kind == OperatorKind::drift_laplacian
                                       ? spectral::apply_drift(curve, u)
                                       : spectral::apply_jacobi(curve, u);
    CHECK((via_matrix - via_fft).abs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("first condition holds on the circle and the (2,3) curve") {
  const auto rep_c = spectral::verify_A1(alcurve::make_circle(kSqrt2, 512));
  CHECK(rep_c.pass);
  CHECK(rep_c.residual_x1 < 1e-10);
  CHECK(rep_c.half_cluster_dim == 2);
  CHECK(rep_c.subspace_angle < 1e-7);

  const auto rep_a = spectral::verify_A1(al23(512));
  CHECK(rep_a.pass);
  CHECK(rep_a.half_cluster_dim == 2);
}

TEST_CASE("condition checks refuse non-shrinkers") {
  const auto off = alcurve::make_circle(1.3, 256);
  CHECK_THROWS_AS(spectral::verify_A1(off), std::invalid_argument);
  CHECK_THROWS_AS(spectral::verify_A2(off), std::invalid_argument);
}

TEST_CASE("second condition: circle multiplicities and missing kernel") {
  const auto rep = spectral::verify_A2(alcurve::make_circle(kSqrt2, 512));
  CHECK(rep.pass);
  CHECK(rep.res_dilation < 1e-10);
  CHECK(rep.res_translation_x1 < 1e-10);
  CHECK(rep.res_translation_x2 < 1e-10);
  CHECK_FALSE(rep.rotation_applicable);
  CHECK(rep.mult_one == 1);
  CHECK(rep.mult_half == 2);
  CHECK(rep.mult_zero == 0);
  CHECK(rep.nearest_to_zero > 0.4);
}

TEST_CASE("second condition: (2,3) identities and multiplicities") {
  const auto rep = spectral::verify_A2(al23(512));
  CHECK(rep.pass);
  CHECK(rep.res_dilation < 1e-7);
  CHECK(rep.res_translation_x1 < 1e-7);
  CHECK(rep.res_translation_x2 < 1e-7);
  CHECK(rep.rotation_applicable);
  CHECK(rep.res_rotation < 1e-7);
  CHECK(rep.mult_one == 1);
  CHECK(rep.mult_half == 2);
  CHECK(rep.mult_zero == 1);
  CHECK(rep.max_multiplicity <= 2);
}

TEST_CASE("sphere spectra") {
  const auto k1 = spectral::sphere_spectrum(1, 4);
  CHECK(k1[0] == 0.0);
  CHECK(k1[1] == doctest::Approx(0.5));
  CHECK(k1[2] == doctest::Approx(2.0));
  CHECK(k1[3] == doctest::Approx(4.5));

  const auto k2 = spectral::sphere_spectrum(2, 3);
  CHECK(k2[1] == doctest::Approx(0.5));
  CHECK(k2[2] == doctest::Approx(1.5));  // (k+1)/k for k = 2

  for (int k = 1; k <= 5; ++k) {
    CHECK(spectral::sphere_spectrum(k, 2)[1] == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(spectral::sphere_spectrum(0, 3), std::invalid_argument);
}

TEST_CASE("subspace angle of identical spans is zero") {
  const auto curve = alcurve::make_circle(kSqrt2, 128);
  const Eigen::ArrayXd w = curve.rho * curve.h;
  const Eigen::ArrayXd a = curve.sigma.sin();
  const Eigen::ArrayXd b = curve.sigma.cos();
  const double angle = spectral::subspace_angle(w, a, b, 2.0 * b, a - b);
  CHECK(angle < 1e-7);
}
