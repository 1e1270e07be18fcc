#include "shrinklab/gauss.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

using namespace shrinklab;
using gauss::MultiIndex;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("moment table values are exact integers") {
  CHECK(gauss::gaussian_moment_exact(MultiIndex{0}) == 1);
  CHECK(gauss::gaussian_moment_exact(MultiIndex{2}) == 2);
  CHECK(gauss::gaussian_moment_exact(MultiIndex{4}) == 12);
  CHECK(gauss::gaussian_moment_exact(MultiIndex{6}) == 120);
  CHECK(gauss::gaussian_moment_exact(MultiIndex{2, 2}) == 4);
  CHECK(gauss::gaussian_moment_exact(MultiIndex{4, 2}) == 24);
  CHECK(gauss::gaussian_moment_exact(MultiIndex{2, 2, 2}) == 8);
}

TEST_CASE("odd entries give zero moments") {
  CHECK(gauss::gaussian_moment(MultiIndex{1, 2}) == 0.0);
  CHECK(gauss::gaussian_moment(MultiIndex{3}) == 0.0);
  CHECK(gauss::gaussian_moment(MultiIndex{2, 1, 2}) == 0.0);
}

TEST_CASE("multi-index validation") {
  CHECK_THROWS_AS(MultiIndex{-1}, std::invalid_argument);
  CHECK_THROWS_AS(MultiIndex(std::vector<int>{}), std::invalid_argument);
  CHECK(MultiIndex{2, 4}.degree() == 6);
}

TEST_CASE("quadrature rule is normalized and positive") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto rule = gauss::gauss_hermite_rule(dim, 6);
    CHECK((rule.weights > 0.0).all());
    CHECK(std::fabs(rule.weights.sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("quadrature anchors") {
  const auto rule = gauss::gauss_hermite_rule(1, 5);
  CHECK(gauss::moment_by_quadrature(MultiIndex{0}, rule) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gauss::moment_by_quadrature(MultiIndex{4}, rule) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(gauss::moment_by_quadrature(MultiIndex{6}, rule) == doctest::Approx(120.0).epsilon(1e-12));
}

TEST_CASE("quadrature agrees with the closed form up to degree 8, dims up to 3") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto rule = gauss::gauss_hermite_rule(dim, 5);
    std::vector<int> alpha(static_cast<size_t>(dim), 0);
    // enumerate all even tuples with |alpha| <= 8
    std::function<void(int, int)> visit = [&](int pos, int remaining) {
      if (pos == dim) {
        const MultiIndex mi(alpha);
        const double exact = gauss::gaussian_moment(mi);
        const double quad = gauss::moment_by_quadrature(mi, rule);
        CHECK(std::fabs(exact - quad) < 1e-10);
        return;
      }
      for (int e = 0; e <= remaining; e += 2) {
        alpha[static_cast<size_t>(pos)] = e;
        visit(pos + 1, remaining - e);
      }
    };
    visit(0, 8);
  }
}

TEST_CASE("degree-insufficient or mismatched rules are rejected") {
  const auto rule = gauss::gauss_hermite_rule(1, 3);  // exact through degree 5
  CHECK_THROWS_AS(gauss::moment_by_quadrature(MultiIndex{6}, rule), std::invalid_argument);
  CHECK_THROWS_AS(gauss::moment_by_quadrature(MultiIndex{2, 2}, rule), std::invalid_argument);
}

TEST_CASE("upper incomplete gamma basics") {
  // Gamma(1, x) = exp(-x)
  for (double x : {0.1, 1.0, 4.0, 20.0}) {
    CHECK(gauss::upper_incomplete_gamma(1.0, x) ==
          doctest::Approx(std::exp(-x)).epsilon(1e-13));
  }
  // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
  for (double x : {0.25, 1.0, 9.0}) {
    CHECK(gauss::upper_incomplete_gamma(0.5, x) ==
          doctest::Approx(std::sqrt(kPi) * std::erfc(std::sqrt(x))).epsilon(1e-13));
  }
  // recurrence Gamma(s+1,x) = s Gamma(s,x) + x^s exp(-x)
  for (double s : {0.5, 1.5, 2.5}) {
    for (double x : {0.5, 2.0, 10.0}) {
      const double lhs = gauss::upper_incomplete_gamma(s + 1.0, x);
      const double rhs =
          s * gauss::upper_incomplete_gamma(s, x) + std::pow(x, s) * std::exp(-x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }
}

TEST_CASE("cutoff tail closed forms") {
  // n=1, m=0: 2 sqrt(pi) erfc(R/2)
  CHECK(gauss::cutoff_tail(1, 0, 2.0) ==
        doctest::Approx(2.0 * std::sqrt(kPi) * std::erfc(1.0)).epsilon(1e-12));
  // n=3, m=0: by parts, 8 pi R exp(-R^2/4) + 8 pi^{3/2} erfc(R/2)
  for (double R : {1.0, 2.5, 6.0}) {
    const double expected = 8.0 * kPi * R * std::exp(-R * R / 4.0) +
                            8.0 * std::pow(kPi, 1.5) * std::erfc(R / 2.0);
    CHECK(gauss::cutoff_tail(3, 0, R) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("cutoff tail decreases in R and rejects R < 1") {
  CHECK_THROWS_AS(gauss::cutoff_tail(1, 0, 0.5), std::domain_error);
  for (int n = 1; n <= 3; ++n) {
    for (int m = 0; m <= 6; m += 3) {
      double prev = gauss::cutoff_tail(n, m, 1.0);
      for (double R = 1.5; R <= 10.0; R += 0.5) {
        const double cur = gauss::cutoff_tail(n, m, R);
        CHECK(cur < prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("tail ratio is bounded and eventually non-increasing") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 0; m <= 6; ++m) {
      std::vector<double> ratios;
      for (double R = 1.0; R <= 10.0 + 1e-9; R += 0.05) {
        const double r = gauss::cutoff_tail_ratio(n, m, R);
        CHECK(std::isfinite(r));
        CHECK(r > 0.0);
        ratios.push_back(r);
      }
      const auto peak = std::max_element(ratios.begin(), ratios.end());
      for (auto it = peak; it + 1 != ratios.end(); ++it) {
        CHECK(*(it + 1) <= *it * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("poincare anchors") {
  const int n = 4001;
  gauss::SampledFunction f;
  f.axes = {Eigen::ArrayXd::LinSpaced(n, -40.0, 40.0)};
  f.values = Eigen::ArrayXd::Ones(n);
  f.gradient = {Eigen::ArrayXd::Zero(n)};
  auto p = gauss::gaussian_poincare_check(f, 1);
  CHECK(p.lhs == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(p.rhs == doctest::Approx(1.0).epsilon(1e-10));

  f.values = f.axes[0];
  f.gradient = {Eigen::ArrayXd::Ones(n)};
  p = gauss::gaussian_poincare_check(f, 1);
  CHECK(p.lhs == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(p.rhs == doctest::Approx(6.0).epsilon(1e-10));

  f.values = Eigen::ArrayXd::Zero(n);
  f.gradient = {Eigen::ArrayXd::Zero(n)};
  p = gauss::gaussian_poincare_check(f, 1);
  CHECK(p.lhs == 0.0);
  CHECK(p.rhs == 0.0);
}

TEST_CASE("poincare check rejects mismatched grids") {
  gauss::SampledFunction f;
  f.axes = {Eigen::ArrayXd::LinSpaced(11, -1.0, 1.0)};
  f.values = Eigen::ArrayXd::Zero(11);
  f.gradient = {Eigen::ArrayXd::Zero(10)};
  CHECK_THROWS_AS(gauss::gaussian_poincare_check(f, 1), std::invalid_argument);
  f.gradient = {};
  CHECK_THROWS_AS(gauss::gaussian_poincare_check(f, 1), std::invalid_argument);
}

TEST_CASE("poincare inequality on random polynomial-times-bump functions") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int n = 2001;
  const double half_width = 6.0;
  const Eigen::ArrayXd y = Eigen::ArrayXd::LinSpaced(n, -half_width, half_width);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::ArrayXd poly = Eigen::ArrayXd::Zero(n);
    Eigen::ArrayXd dpoly = Eigen::ArrayXd::Zero(n);
    for (int d = 0; d < 5; ++d) {
      const double c = unif(rng);
      poly += c * y.pow(d);
      if (d >= 1) dpoly += c * d * y.pow(d - 1);
    }
    Eigen::ArrayXd bump = Eigen::ArrayXd::Zero(n);
    Eigen::ArrayXd dbump = Eigen::ArrayXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      const double t = y[i] / half_width;
      if (std::fabs(t) < 1.0 - 1e-12) {
        const double den = 1.0 - t * t;
        bump[i] = std::exp(-1.0 / den);
        dbump[i] = bump[i] * (-2.0 * t / (half_width * den * den));
      }
    }
    gauss::SampledFunction f;
    f.axes = {y};
    f.values = poly * bump;
    f.gradient = {dpoly * bump + poly * dbump};
    const auto p = gauss::gaussian_poincare_check(f, 1);
    CHECK(p.lhs <= p.rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("poincare check in two dimensions") {
  const int n = 201;
  const Eigen::ArrayXd ax = Eigen::ArrayXd::LinSpaced(n, -12.0, 12.0);
  gauss::SampledFunction f;
  f.axes = {ax, ax};
  Eigen::ArrayXd vals(n * n), g0(n * n), g1(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // u = y1: lhs = (I4 + I22)/4 = (12+4)/4 = 4, rhs = 2*2 + 4 = 8
      vals[i * n + j] = ax[i];
      g0[i * n + j] = 1.0;
      g1[i * n + j] = 0.0;
    }
  }
  f.values = vals;
  f.gradient = {g0, g1};
  const auto p = gauss::gaussian_poincare_check(f, 2);
  CHECK(p.lhs == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(p.rhs == doctest::Approx(8.0).epsilon(1e-8));
  CHECK(p.lhs <= p.rhs);
}
