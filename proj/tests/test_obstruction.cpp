#include "shrinklab/obstruction.hpp"

#include "shrinklab/alcurve.hpp"
#include "shrinklab/gauss.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace shrinklab;
using obstruction::CrossSectionInvariants;
using obstruction::QuadCoeffs;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kCircleArea = std::sqrt(2.0 * kPi) * std::exp(-0.5);

Eigen::MatrixXd random_symmetric(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      a(i, j) = unif(rng);
      a(j, i) = a(i, j);
    }
  }
  return a;
}

}  // namespace

TEST_CASE("field norm formula and quadrature oracle") {
  CrossSectionInvariants inv;
  inv.lambda = 1.0;
  inv.B1 = -1.0;
  inv.k = 1;
  inv.n = 2;
  inv.m = 1;

  QuadCoeffs zero(Eigen::MatrixXd::Zero(1, 1));
  CHECK(obstruction::jacobi_norm(zero, inv) == 0.0);

  QuadCoeffs one(Eigen::MatrixXd::Ones(1, 1));
  CHECK(obstruction::jacobi_norm(one, inv) == doctest::Approx(8.0).epsilon(1e-15));

  // independent quadrature: int (y^2-2)^2 rho = I4 - 4 I2 + 4 I0 = 8
  const auto rule = gauss::gauss_hermite_rule(1, 4);
  const Eigen::ArrayXd u = rule.nodes[0].square() - 2.0;
  CHECK((u.square() * rule.weights).sum() == doctest::Approx(8.0).epsilon(1e-13));

  CrossSectionInvariants circle = obstruction::sphere_cross_section(1, 2);
  QuadCoeffs ident(Eigen::MatrixXd::Identity(2, 2));
  CHECK(obstruction::jacobi_norm(ident, circle) ==
        doctest::Approx(8.0 * kCircleArea * 2.0).epsilon(1e-12));
}

TEST_CASE("field norm quadrature oracle for dims up to 3") {
  std::mt19937_64 rng(11);
  for (int dim = 1; dim <= 3; ++dim) {
    const auto rule = gauss::gauss_hermite_rule(dim, 4);
    for (int trial = 0; trial < 20; ++trial) {
      QuadCoeffs coeffs(random_symmetric(dim, rng));
      // evaluate u at the quadrature nodes
      Eigen::ArrayXd u = Eigen::ArrayXd::Zero(rule.weights.size());
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          Eigen::ArrayXd term = rule.nodes[i] * rule.nodes[j];
          if (i == j) term -= 2.0;
          u += coeffs.a(i, j) * term;
        }
      }
      const double quad = (u.square() * rule.weights).sum();
      CrossSectionInvariants inv = obstruction::sphere_cross_section(1, dim);
      const double formula = obstruction::jacobi_norm(coeffs, inv);
      CHECK(formula == doctest::Approx(inv.lambda * quad).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed-form projection anchors") {
  CrossSectionInvariants circle = obstruction::sphere_cross_section(1, 1);

  QuadCoeffs zero(Eigen::MatrixXd::Zero(1, 1));
  CHECK(obstruction::quadratic_projection_closedform(zero, 0, circle) == 0.0);

  QuadCoeffs one(Eigen::MatrixXd::Ones(1, 1));
  CHECK(obstruction::quadratic_projection_closedform(one, 0, circle) ==
        doctest::Approx(128.0 * circle.B1).epsilon(1e-12));
  CHECK(obstruction::quadratic_projection_closedform(one, 0, circle) < 0.0);

  CHECK_THROWS_AS(obstruction::quadratic_projection_closedform(one, 1, circle),
                  std::out_of_range);
}

TEST_CASE("brute-force expansion anchors") {
  QuadCoeffs a1(Eigen::MatrixXd::Constant(1, 1, 1.0));
  CHECK(obstruction::quadratic_projection_bruteforce(a1, 0) ==
        doctest::Approx(64.0).epsilon(1e-13));

  QuadCoeffs a_scaled(Eigen::MatrixXd::Constant(1, 1, 0.7));
  CHECK(obstruction::quadratic_projection_bruteforce(a_scaled, 0) ==
        doctest::Approx(64.0 * 0.49).epsilon(1e-13));

  Eigen::MatrixXd off = Eigen::MatrixXd::Zero(2, 2);
  off(0, 1) = off(1, 0) = 1.0;
  QuadCoeffs a_off(off);
  CHECK(obstruction::quadratic_projection_bruteforce(a_off, 0) ==
        doctest::Approx(64.0).epsilon(1e-13));
  CHECK(obstruction::quadratic_projection_bruteforce(a_off, 1) ==
        doctest::Approx(64.0).epsilon(1e-13));

  CHECK_THROWS_AS(
      obstruction::quadratic_projection_bruteforce(QuadCoeffs(Eigen::MatrixXd::Zero(7, 7)), 0),
      std::invalid_argument);
}

TEST_CASE("brute force equals the closed form on random ensembles") {
  std::mt19937_64 rng(3);
  for (int dim = 1; dim <= 4; ++dim) {
    for (int trial = 0; trial < 250; ++trial) {
      QuadCoeffs coeffs(random_symmetric(dim, rng));
      for (int b = 0; b < dim; ++b) {
        const double brute = obstruction::quadratic_projection_bruteforce(coeffs, b);
        CHECK(std::fabs(brute - 64.0 * coeffs.row_sum_squares(b)) < 1e-10);
      }
    }
  }
}

TEST_CASE("lower bound: dim-1 equality, diag(1,0) gap, identity equality") {
  CrossSectionInvariants inv1 = obstruction::sphere_cross_section(1, 1);
  QuadCoeffs a1(Eigen::MatrixXd::Constant(1, 1, 0.3));
  const auto lb1 = obstruction::obstruction_lower_bound(a1, inv1);
  CHECK(lb1.lhs == doctest::Approx(lb1.rhs).epsilon(1e-14));

  CrossSectionInvariants inv2 = obstruction::sphere_cross_section(1, 2);
  Eigen::MatrixXd d10 = Eigen::MatrixXd::Zero(2, 2);
  d10(0, 0) = 1.0;
  const auto lb2 = obstruction::obstruction_lower_bound(QuadCoeffs(d10), inv2);
  CHECK(lb2.lhs / lb2.rhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const auto lb3 =
      obstruction::obstruction_lower_bound(QuadCoeffs(Eigen::MatrixXd::Identity(2, 2)), inv2);
  CHECK(lb3.lhs == doctest::Approx(lb3.rhs).epsilon(1e-12));
}

TEST_CASE("lower bound holds on random ensembles") {
  std::mt19937_64 rng(17);
  for (int dim = 1; dim <= 4; ++dim) {
    CrossSectionInvariants inv = obstruction::sphere_cross_section(1, dim);
    for (int trial = 0; trial < 400; ++trial) {
      QuadCoeffs coeffs(random_symmetric(dim, rng));
      if (coeffs.sum_squares() == 0.0) continue;
      const auto lb = obstruction::obstruction_lower_bound(coeffs, inv);
      CHECK(lb.lhs >= lb.rhs * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("quadratic homogeneity in the coefficients") {
  std::mt19937_64 rng(23);
  CrossSectionInvariants inv = obstruction::sphere_cross_section(1, 3);
  const QuadCoeffs base(random_symmetric(3, rng));
  const double t = 1.7;
  const QuadCoeffs scaled(Eigen::MatrixXd(t * base.a));
  CHECK(obstruction::jacobi_norm(scaled, inv) ==
        doctest::Approx(t * t * obstruction::jacobi_norm(base, inv)).epsilon(1e-14));
  for (int b = 0; b < 3; ++b) {
    CHECK(obstruction::quadratic_projection_closedform(scaled, b, inv) ==
          doctest::Approx(t * t * obstruction::quadratic_projection_closedform(base, b, inv))
              .epsilon(1e-14));
    CHECK(obstruction::quadratic_projection_bruteforce(scaled, b) ==
          doctest::Approx(t * t * obstruction::quadratic_projection_bruteforce(base, b))
              .epsilon(1e-12));
  }
}

TEST_CASE("degenerate and invalid inputs are rejected") {
  CrossSectionInvariants inv = obstruction::sphere_cross_section(1, 2);
  CHECK_THROWS_AS(
      obstruction::obstruction_lower_bound(QuadCoeffs(Eigen::MatrixXd::Zero(2, 2)), inv),
      std::invalid_argument);
  CHECK_THROWS_AS(
      obstruction::obstruction_lower_bound(QuadCoeffs(Eigen::MatrixXd::Identity(3, 3)), inv),
      std::invalid_argument);
  CHECK_THROWS_AS(QuadCoeffs(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("curve-built invariants match the sphere formula for the circle") {
  const auto circle = alcurve::make_circle(alcurve::kSqrt2, 512);
  const auto routes = alcurve::compute_B1(circle);
  const double lambda = alcurve::gaussian_area(circle);
  const auto inv = obstruction::sphere_cross_section(1, 2);
  CHECK(lambda == doctest::Approx(inv.lambda).epsilon(1e-12));
  CHECK(routes.route_a == doctest::Approx(inv.B1).epsilon(1e-10));
}
