#include "shrinklab/variation.hpp"

#include "shrinklab/fourier.hpp"
#include "shrinklab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace shrinklab::variation {

namespace {

constexpr double kRhoNorm = 0.28209479177387814347;  // (4 pi)^{-1/2}

void refuse_non_shrinker(const ClosedCurve& base, const char* where) {
  if (base.shrinker_residual > 1e-6) {
    throw std::invalid_argument(std::string(where) +
                                ": base curve is not a shrinker (residual " +
                                std::to_string(base.shrinker_residual) + ")");
  }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  // least squares slope of log(y) vs log(x); ignores non-positive entries
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

NormalField NormalField::from_values(const ClosedCurve& base, const ArrayXd& v) {
  if (v.size() != base.size()) {
    throw std::invalid_argument("normal field grid does not match the base curve");
  }
  NormalField f;
  f.values = v;
  f.dot = fourier::derivative(v, base.length);
  f.ddot = fourier::derivative(v, base.length, 2);
  const ArrayXd ddot_twice = fourier::derivative(f.dot, base.length);
  f.second_derivative_consistency = (ddot_twice - f.ddot).abs().maxCoeff();
  return f;
}

PerturbedCurve PerturbedCurve::make(const ClosedCurve& base, const NormalField& v,
                                    double eps) {
  const Eigen::Index n = base.size();
  PerturbedCurve p;
  p.epsilon = eps;

  if (eps == 0.0) {
    p.position = base.position;
    p.tangent = base.tangent;
    p.normal = base.normal;
    p.speed = ArrayXd::Ones(n);
    p.kappa = base.kappa;
    p.rho = base.rho;
    p.phi = shrinker_quantity(base);
    p.F = alcurve::gaussian_area(base);
    const ArrayXd dm = base.rho * base.h;
    p.phi_l2 = std::sqrt((p.phi.square() * dm).sum());
    p.phi_l1 = (p.phi.abs() * dm).sum();
    return p;
  }

  p.position = base.position;
  p.position.col(0) += eps * v.values * base.normal.col(0);
  p.position.col(1) += eps * v.values * base.normal.col(1);

  const double len = base.length;
  const ArrayXd d0 = fourier::derivative(p.position.col(0), len);
  const ArrayXd d1 = fourier::derivative(p.position.col(1), len);
  const ArrayXd dd0 = fourier::derivative(p.position.col(0), len, 2);
  const ArrayXd dd1 = fourier::derivative(p.position.col(1), len, 2);

  p.speed = (d0.square() + d1.square()).sqrt();
  p.tangent = ArrayX2d(n, 2);
  p.tangent.col(0) = d0 / p.speed;
  p.tangent.col(1) = d1 / p.speed;
  p.normal = ArrayX2d(n, 2);
  p.normal.col(0) = p.tangent.col(1);
  p.normal.col(1) = -p.tangent.col(0);

  p.kappa = (d0 * dd1 - d1 * dd0) / p.speed.cube();
  const ArrayXd r2 = p.position.col(0).square() + p.position.col(1).square();
  p.rho = kRhoNorm * (-r2 / 4.0).exp();

  const ArrayXd xn = p.position.col(0) * p.normal.col(0) +
                     p.position.col(1) * p.normal.col(1);
  p.phi = 0.5 * xn - p.kappa;

  const ArrayXd dm = p.rho * p.speed * base.h;  // arclength measure on the graph
  p.F = dm.sum();
  p.phi_l2 = std::sqrt((p.phi.square() * dm).sum());
  p.phi_l1 = (p.phi.abs() * dm).sum();
  return p;
}

ArrayXd shrinker_quantity(const ClosedCurve& curve) {
  const ArrayXd xn = curve.position.col(0) * curve.normal.col(0) +
                     curve.position.col(1) * curve.normal.col(1);
  return 0.5 * xn - curve.kappa;
}

SecondVariationFields second_variation_formula(const ClosedCurve& base,
                                               const NormalField& v) {
  SecondVariationFields out;
  const ArrayXd& k = base.kappa;
  out.normal = -2.0 * k *
               (k.square() * v.values.square() + v.dot.square() + 2.0 * v.values * v.ddot);
  const ArrayXd lv = spectral::apply_jacobi(base, v.values);
  out.tangent = -2.0 * lv * v.dot;
  return out;
}

ConvergenceReport first_variation_check(const ClosedCurve& base, const NormalField& v,
                                        const std::vector<double>& eps_list) {
  refuse_non_shrinker(base, "first_variation_check");
  if (eps_list.empty()) throw std::invalid_argument("eps_list must not be empty");

  const ArrayXd lv = spectral::apply_jacobi(base, v.values);
  ConvergenceReport rep;
  rep.eps = eps_list;
  for (double eps : eps_list) {
    const PerturbedCurve p = PerturbedCurve::make(base, v, eps);
    rep.residual.push_back(base.norm(p.phi / eps - lv));
  }
  rep.all_zero = true;
  for (double r : rep.residual) rep.all_zero = rep.all_zero && r < 1e-14;
  rep.slope = rep.all_zero ? 0.0 : fit_slope(rep.eps, rep.residual);

  // Richardson on the central difference at the smallest step.
  const double e = *std::min_element(eps_list.begin(), eps_list.end());
  auto central = [&](double ee) {
    const PerturbedCurve pp = PerturbedCurve::make(base, v, ee);
    const PerturbedCurve pm = PerturbedCurve::make(base, v, -ee);
    return ArrayXd((pp.phi - pm.phi) / (2.0 * ee));
  };
  const ArrayXd g1 = central(e);
  const ArrayXd g2 = central(e / 2.0);
  rep.limit_error = base.norm((4.0 * g2 - g1) / 3.0 - lv);
  return rep;
}

namespace {

// Vector second difference of phi N against the base frame.
struct SecondDifference {
  ArrayXd normal;
  ArrayXd tangent;
};

SecondDifference fd_second_variation(const ClosedCurve& base, const NormalField& v,
                                     double eps) {
  const PerturbedCurve pp = PerturbedCurve::make(base, v, eps);
  const PerturbedCurve pm = PerturbedCurve::make(base, v, -eps);
  const ArrayXd phi0 = shrinker_quantity(base);

  const ArrayXd f0x = pp.phi * pp.normal.col(0) + pm.phi * pm.normal.col(0) -
                      2.0 * phi0 * base.normal.col(0);
  const ArrayXd f0y = pp.phi * pp.normal.col(1) + pm.phi * pm.normal.col(1) -
                      2.0 * phi0 * base.normal.col(1);
  SecondDifference d;
  d.normal = (f0x * base.normal.col(0) + f0y * base.normal.col(1)) / (eps * eps);
  d.tangent = (f0x * base.tangent.col(0) + f0y * base.tangent.col(1)) / (eps * eps);
  return d;
}

}  // namespace

SecondVariationReport second_variation_check(const ClosedCurve& base,
                                             const NormalField& v,
                                             const std::vector<double>& eps_list) {
  refuse_non_shrinker(base, "second_variation_check");
  if (eps_list.empty()) throw std::invalid_argument("eps_list must not be empty");

  const SecondVariationFields formula = second_variation_formula(base, v);
  SecondVariationReport rep;

  std::vector<double> resid;
  for (double eps : eps_list) {
    const SecondDifference d = fd_second_variation(base, v, eps);
    resid.push_back(base.norm(d.normal - formula.normal));
  }
  rep.slope = fit_slope(eps_list, resid);

  const double e = *std::min_element(eps_list.begin(), eps_list.end());
  const SecondDifference d1 = fd_second_variation(base, v, e);
  const SecondDifference d2 = fd_second_variation(base, v, e / 2.0);
  const ArrayXd extrap_n = (4.0 * d2.normal - d1.normal) / 3.0;
  const ArrayXd extrap_t = (4.0 * d2.tangent - d1.tangent) / 3.0;

  rep.normal_error = base.norm(extrap_n - formula.normal);
  rep.tangent_error = base.norm(extrap_t - formula.tangent);
  const double fd_spread = base.norm(d1.normal - d2.normal);
  rep.budget = 2.0 * fd_spread / 3.0 + 1e-7 * (1.0 + base.norm(formula.normal)) +
               20.0 * base.shrinker_residual;
  rep.pass = rep.normal_error <= rep.budget;
  return rep;
}

TaylorReport taylor_remainder_check(const ClosedCurve& base, const NormalField& v,
                                    const std::vector<double>& eps_list) {
  refuse_non_shrinker(base, "taylor_remainder_check");
  if (eps_list.empty()) throw std::invalid_argument("eps_list must not be empty");

  const ArrayXd lv = spectral::apply_jacobi(base, v.values);
  const SecondVariationFields formula = second_variation_formula(base, v);

  TaylorReport rep;
  rep.eps = eps_list;
  for (double eps : eps_list) {
    const PerturbedCurve p = PerturbedCurve::make(base, v, eps);
    rep.remainder1.push_back(base.norm(p.phi - eps * lv));
    rep.remainder2.push_back(
        base.norm(p.phi - eps * lv - 0.5 * eps * eps * formula.normal));
  }
  rep.all_zero = true;
  for (size_t i = 0; i < rep.remainder1.size(); ++i) {
    rep.all_zero = rep.all_zero && rep.remainder1[i] < 1e-14 &&
                   rep.remainder2[i] < 1e-14;
  }
  rep.slope1 = rep.all_zero ? 0.0 : fit_slope(rep.eps, rep.remainder1);
  rep.slope2 = rep.all_zero ? 0.0 : fit_slope(rep.eps, rep.remainder2);

  // Trust the slope fits only when v is spectrally resolved on this grid.
  const int n_modes = static_cast<int>(base.size()) / 2;
  const ArrayXd amps = fourier::mode_amplitudes(v.values, n_modes);
  const double peak = amps.maxCoeff();
  const double tail = amps.tail(n_modes / 4).maxCoeff();
  rep.resolved = peak == 0.0 || tail <= 1e-8 * peak;
  return rep;
}

FExpansionReport F_expansion_check(const ClosedCurve& base, const NormalField& v,
                                   const std::vector<double>& eps_list) {
  refuse_non_shrinker(base, "F_expansion_check");
  const double f0 = alcurve::gaussian_area(base);
  const double vnorm = base.norm(v.values);

  FExpansionReport rep;
  rep.eps = eps_list;
  for (double eps : eps_list) {
    const PerturbedCurve p = PerturbedCurve::make(base, v, eps);
    const double gap = std::fabs(p.F - f0);
    const double unorm = std::fabs(eps) * vnorm;
    const double bound = p.phi_l2 * unorm + unorm * unorm * unorm;
    rep.gap.push_back(gap);
    rep.bound.push_back(bound);
    rep.fitted_c.push_back(bound > 0.0 ? gap / bound : 0.0);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double c : rep.fitted_c) {
    if (c > 0.0) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  }
  rep.c_spread = (hi > 0.0 && std::isfinite(lo)) ? hi / lo - 1.0 : 0.0;
  return rep;
}

ArrayXd random_direction(const ClosedCurve& base, int max_mode, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return std::ldexp(static_cast<double>(rng()), -64);  // [0,1)
  };
  auto normal = [&]() {
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  };

  const Eigen::Index n = base.size();
  const ArrayXd t = base.sigma * (2.0 * 3.14159265358979323846 / base.length);
  ArrayXd v = ArrayXd::Zero(n);
  for (int j = 0; j <= max_mode; ++j) {
    const double decay = 1.0 / (1.0 + static_cast<double>(j) * j);
    const double a = normal() * decay;
    const double b = (j == 0) ? 0.0 : normal() * decay;
    v += a * (static_cast<double>(j) * t).cos() + b * (static_cast<double>(j) * t).sin();
  }
  const double peak = v.abs().maxCoeff();
  if (peak > 0.0) v /= peak;
  return v;
}

LojaReport lojasiewicz_gradient_check(const ClosedCurve& base, const LojaOptions& opts) {
  refuse_non_shrinker(base, "lojasiewicz_gradient_check");
  const double f0 = alcurve::gaussian_area(base);

  LojaReport rep;
  rep.directions = opts.directions;
  rep.C = 0.0;
  rep.min_local_exponent = std::numeric_limits<double>::infinity();

  for (int d = 0; d < opts.directions; ++d) {
    const ArrayXd dir = random_direction(base, opts.max_mode,
                                         opts.seed * 0x9e3779b97f4a7c15ULL + d);
    const NormalField field = NormalField::from_values(base, dir);

    std::vector<double> phis, gaps;
    for (int e = 0; e < opts.eps_per_direction; ++e) {
      const double frac = (opts.eps_per_direction == 1)
                              ? 0.0
                              : static_cast<double>(e) / (opts.eps_per_direction - 1);
      const double eps = opts.amp_lo * std::pow(opts.amp_hi / opts.amp_lo, frac);
      const PerturbedCurve p = PerturbedCurve::make(base, field, eps);
      const double gap = std::fabs(p.F - f0);
      if (p.phi_l2 < opts.noise_floor) {
        ++rep.excluded;
        continue;
      }
      rep.samples.push_back({d, eps, p.phi_l2, gap});
      phis.push_back(p.phi_l2);
      gaps.push_back(gap);
      rep.C = std::max(rep.C, gap / std::pow(p.phi_l2, 1.5));
    }
    if (phis.size() >= 3) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int m = 0;
      for (size_t i = 0; i < phis.size(); ++i) {
        if (gaps[i] <= 0.0) continue;
        const double lx = std::log(phis[i]);
        const double ly = std::log(gaps[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
      }
      if (m >= 3) {
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        rep.min_local_exponent = std::min(rep.min_local_exponent, slope);
      }
    }
  }
  return rep;
}

FunctionalReport functional_report(const ClosedCurve& base, const NormalField& v,
                                   double eps) {
  const PerturbedCurve p = PerturbedCurve::make(base, v, eps);
  FunctionalReport rep;
  rep.phi_l1 = p.phi_l1;
  rep.phi_l2 = p.phi_l2;
  rep.F_value = p.F;
  rep.F_gap = p.F - alcurve::gaussian_area(base);
  return rep;
}

}  // namespace shrinklab::variation
