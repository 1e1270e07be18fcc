#include "shrinklab/alcurve.hpp"

#include "shrinklab/fourier.hpp"
#include "shrinklab/version.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

namespace shrinklab::alcurve {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRhoNorm = 0.28209479177387814347;  // (4 pi)^{-1/2}

struct PhaseState {
  double w;      // ln kappa
  double v;      // d(ln kappa)/d(sigma)
  double theta;  // tangent angle
};

double force(double w) { return 0.5 - std::exp(2.0 * w); }

double energy(double w, double v) {
  return 0.5 * v * v + 0.5 * std::exp(2.0 * w) - 0.5 * w;
}

// Kick-drift-kick leapfrog. The drift moves w linearly, so the tangent angle
// theta' = e^w integrates exactly across it.
void leapfrog(PhaseState& s, double tau) {
  s.v += 0.5 * tau * force(s.w);
  const double a = tau * s.v;
  if (std::fabs(a) > 1e-8) {
    s.theta += std::exp(s.w) * std::expm1(a) / s.v;
  } else {
    s.theta += tau * std::exp(s.w) * (1.0 + 0.5 * a + a * a / 6.0);
  }
  s.w += a;
  s.v += 0.5 * tau * force(s.w);
}

void yoshida4(PhaseState& s, double tau) {
  constexpr double cbrt2 = 1.25992104989487316477;
  constexpr double w1 = 1.0 / (2.0 - cbrt2);
  constexpr double w0 = -cbrt2 / (2.0 - cbrt2);
  leapfrog(s, w1 * tau);
  leapfrog(s, w0 * tau);
  leapfrog(s, w1 * tau);
}

void advance(PhaseState& s, double span, double max_substep) {
  const int m = std::max(1, static_cast<int>(std::ceil(span / max_substep)));
  const double tau = span / m;
  for (int i = 0; i < m; ++i) yoshida4(s, tau);
}

// Arclength of the half oscillation starting at the curvature maximum
// (w = ln kappa_max, v = 0), located by bisection on the one-step map at the
// bracketing substep. Returns the state at the crossing.
double half_period(double kappa_max, const OdeOptions& opts, PhaseState* end_state) {
  PhaseState s{std::log(kappa_max), 0.0, 0.0};
  const double h = opts.max_substep;
  double t = 0.0;

  // One substep to leave the v = 0 start.
  yoshida4(s, h);
  t += h;
  if (!(s.v < 0.0)) {
    throw IntegrationError("half_period: curvature maximum did not descend", t);
  }

  const double t_guard = 1e6;
  PhaseState prev = s;
  double t_prev = t;
  while (s.v < 0.0) {
    prev = s;
    t_prev = t;
    yoshida4(s, h);
    t += h;
    if (!std::isfinite(s.w) || !std::isfinite(s.v)) {
      throw IntegrationError("half_period: state became non-finite", t);
    }
    if (t > t_guard) {
      throw IntegrationError("half_period: no return of kappa' to zero", t);
    }
  }

  // Bisect tau in (0, h]: v(prev advanced by tau) crosses zero.
  double lo = 0.0, hi = h;
  PhaseState mid = s;
  for (int it = 0; it < 100; ++it) {
    const double tau = 0.5 * (lo + hi);
    mid = prev;
    yoshida4(mid, tau);
    if (mid.v < 0.0) {
      lo = tau;
    } else {
      hi = tau;
    }
    if (hi - lo < 1e-16 * std::max(1.0, t_prev)) break;
  }
  mid = prev;
  yoshida4(mid, 0.5 * (lo + hi));
  if (end_state) *end_state = mid;
  return t_prev + 0.5 * (lo + hi);
}

int gcd_int(int a, int b) { return std::gcd(a, b); }

CurvatureProfile circle_profile(int grid) {
  CurvatureProfile prof;
  const double length = 2.0 * kPi * kSqrt2;
  prof.h = length / grid;
  prof.length = length;
  prof.period = length;
  prof.sigma = ArrayXd::LinSpaced(grid, 0.0, length - prof.h);
  prof.kappa = ArrayXd::Constant(grid, kCircleKappa);
  prof.kappa_dot = ArrayXd::Zero(grid);
  prof.first_integral = first_integral(kCircleKappa, 0.0);
  prof.first_integral_drift = 0.0;
  prof.p = 1;
  prof.q = 1;
  prof.kappa_max = kCircleKappa;
  prof.is_circle = true;
  return prof;
}

}  // namespace

double first_integral(double kappa, double kappa_dot) {
  if (kappa <= 0.0) throw std::invalid_argument("first_integral: kappa must be > 0");
  const double w = std::log(kappa);
  const double v = kappa_dot / kappa;
  return energy(w, v);
}

CurvatureProfile integrate_curvature_ode(double kappa0, int steps, double h,
                                         const OdeOptions& opts) {
  if (kappa0 <= 0.0) throw std::invalid_argument("kappa0 must be > 0");
  if (steps < 2 || h <= 0.0) throw std::invalid_argument("invalid steps/h");

  PhaseState s{std::log(kappa0), 0.0, 0.0};
  const double e0 = energy(s.w, s.v);

  CurvatureProfile prof;
  prof.sigma = ArrayXd::LinSpaced(steps, 0.0, h * (steps - 1));
  prof.kappa = ArrayXd(steps);
  prof.kappa_dot = ArrayXd(steps);
  prof.h = h;
  prof.length = h * steps;
  prof.first_integral = e0;
  prof.kappa_max = kappa0;

  double drift = 0.0;
  bool crossed_once = false;
  double crossing_sigma = 0.0;
  double prev_v = 0.0;
  for (int i = 0; i < steps; ++i) {
    prof.kappa[i] = std::exp(s.w);
    prof.kappa_dot[i] = s.v * std::exp(s.w);
    if (!std::isfinite(prof.kappa[i])) {
      throw IntegrationError("curvature integration overflowed", prof.sigma[i]);
    }
    drift = std::max(drift, std::fabs(energy(s.w, s.v) - e0) / std::fabs(e0));
    if (i + 1 < steps) {
      prev_v = s.v;
      advance(s, h, opts.max_substep);
      if (!crossed_once && i > 0 && prev_v < 0.0 && s.v >= 0.0) {
        crossed_once = true;
        crossing_sigma = h * (i + 1);
      }
    }
  }
  prof.first_integral_drift = drift;
  prof.period = crossed_once ? 2.0 * crossing_sigma : prof.length;
  prof.is_circle = std::fabs(kappa0 - kCircleKappa) < 1e-14;
  return prof;
}

double closure_function(int p, int q, double kappa_max, const OdeOptions& opts) {
  if (kappa_max <= kCircleKappa * (1.0 + 1e-12)) {
    throw std::invalid_argument("closure_function: kappa_max must exceed 1/sqrt(2)");
  }
  PhaseState end{};
  half_period(kappa_max, opts, &end);
  return end.theta - kPi * static_cast<double>(p) / static_cast<double>(q);
}

CurvatureProfile find_closed_curve(int p, int q, std::pair<double, double> bracket,
                                   int grid, const OdeOptions& opts) {
  if (p < 1 || q < 1) throw std::invalid_argument("p, q must be >= 1");
  if (gcd_int(p, q) != 1) throw std::invalid_argument("p, q must be coprime");
  if (grid < 8 || grid % 2 != 0) throw std::invalid_argument("grid must be even, >= 8");
  if (p == 1 && q == 1) return circle_profile(grid);

  double lo = std::max(bracket.first, kCircleKappa * (1.0 + 1e-9));
  double hi = bracket.second;
  if (!(hi > lo)) throw std::invalid_argument("invalid bracket");

  // Scan for a sign change; the admissible window is discovered, not assumed.
  const int scan = 96;
  double a = lo, ga = closure_function(p, q, a, opts);
  double root_lo = 0.0, root_hi = 0.0;
  bool found = false;
  for (int i = 1; i <= scan; ++i) {
    const double b = lo * std::pow(hi / lo, static_cast<double>(i) / scan);
    const double gb = closure_function(p, q, b, opts);
    if (ga == 0.0 || ga * gb < 0.0) {
      root_lo = a;
      root_hi = b;
      found = true;
      break;
    }
    a = b;
    ga = gb;
  }
  if (!found) {
    std::ostringstream msg;
    msg << "no closure root for (p,q)=(" << p << "," << q << ") in bracket ["
        << bracket.first << ", " << bracket.second
        << "]; the rotation ratio is not admissible there";
    throw SearchError(msg.str());
  }

  double glo = closure_function(p, q, root_lo, opts);
  for (int it = 0; it < 200 && root_hi - root_lo > 1e-14 * root_hi; ++it) {
    const double mid = 0.5 * (root_lo + root_hi);
    const double gm = closure_function(p, q, mid, opts);
    if (glo * gm <= 0.0) {
      root_hi = mid;
    } else {
      root_lo = mid;
      glo = gm;
    }
  }
  const double kappa_max = 0.5 * (root_lo + root_hi);
  const double g_final = closure_function(p, q, kappa_max, opts);
  if (std::fabs(g_final) > 1e-10) {
    std::ostringstream msg;
    msg << "closure search stalled: |g| = " << std::fabs(g_final);
    throw SearchError(msg.str());
  }

  const double ph = half_period(kappa_max, opts, nullptr);
  const double length = 2.0 * q * ph;
  const double h = length / grid;

  PhaseState s{std::log(kappa_max), 0.0, 0.0};
  const double e0 = energy(s.w, s.v);

  CurvatureProfile prof;
  prof.sigma = ArrayXd::LinSpaced(grid, 0.0, length - h);
  prof.kappa = ArrayXd(grid);
  prof.kappa_dot = ArrayXd(grid);
  prof.h = h;
  prof.length = length;
  prof.period = 2.0 * ph;
  prof.first_integral = e0;
  prof.p = p;
  prof.q = q;
  prof.kappa_max = kappa_max;

  double drift = 0.0;
  for (int i = 0; i < grid; ++i) {
    prof.kappa[i] = std::exp(s.w);
    prof.kappa_dot[i] = s.v * std::exp(s.w);
    drift = std::max(drift, std::fabs(energy(s.w, s.v) - e0) / std::fabs(e0));
    if (i + 1 < grid) advance(s, h, opts.max_substep);
  }
  prof.first_integral_drift = drift;
  return prof;
}

ClosedCurve reconstruct_curve(const CurvatureProfile& profile) {
  const Eigen::Index n = profile.sigma.size();
  const double length = profile.length;

  double kappa_mean = 0.0;
  ArrayXd theta = fourier::antiderivative(profile.kappa, length, &kappa_mean);
  const double turning = kappa_mean * length;
  const double windings = turning / (2.0 * kPi);
  const double defect_angle = std::fabs(windings - std::round(windings));
  if (defect_angle > 1e-6) {
    std::ostringstream msg;
    msg << "profile does not close: total turning is " << turning
        << " (angular defect " << defect_angle * 2.0 * kPi << ")";
    throw ClosureError(msg.str(), defect_angle * 2.0 * kPi);
  }

  ClosedCurve curve;
  curve.sigma = profile.sigma;
  curve.kappa = profile.kappa;
  curve.kappa_dot = profile.kappa_dot;
  curve.h = profile.h;
  curve.length = length;
  curve.rotation_index = static_cast<int>(std::round(windings));
  curve.total_turning = turning;
  curve.p = profile.p > 0 ? profile.p : curve.rotation_index;
  curve.q = profile.q;
  curve.kappa_max = profile.kappa_max;

  curve.tangent = ArrayX2d(n, 2);
  curve.normal = ArrayX2d(n, 2);
  curve.tangent.col(0) = theta.cos();
  curve.tangent.col(1) = theta.sin();
  curve.normal.col(0) = curve.tangent.col(1);
  curve.normal.col(1) = -curve.tangent.col(0);

  double mean_t0 = 0.0, mean_t1 = 0.0;
  ArrayXd x0 = fourier::antiderivative(curve.tangent.col(0), length, &mean_t0);
  ArrayXd x1 = fourier::antiderivative(curve.tangent.col(1), length, &mean_t1);
  curve.closure_defect = std::hypot(mean_t0, mean_t1) * length;

  // Rigid translation pinning the shrinker identity at the first sample.
  const double k0 = profile.kappa[0];
  const double kd0 = profile.kappa_dot[0];
  const double ax = (2.0 * kd0 / k0) * curve.tangent(0, 0) + 2.0 * k0 * curve.normal(0, 0);
  const double ay = (2.0 * kd0 / k0) * curve.tangent(0, 1) + 2.0 * k0 * curve.normal(0, 1);
  curve.position = ArrayX2d(n, 2);
  curve.position.col(0) = x0 + (ax - x0[0]);
  curve.position.col(1) = x1 + (ay - x1[0]);

  const ArrayXd r2 =
      curve.position.col(0).square() + curve.position.col(1).square();
  curve.rho = kRhoNorm * (-r2 / 4.0).exp();

  const ArrayXd rho_kappa = curve.rho * curve.kappa;
  curve.weight_constant = rho_kappa.mean();
  curve.weight_constant_rel_var =
      ((rho_kappa / curve.weight_constant) - 1.0).abs().maxCoeff();

  const ArrayXd xn = curve.position.col(0) * curve.normal.col(0) +
                     curve.position.col(1) * curve.normal.col(1);
  curve.shrinker_residual = (0.5 * xn - curve.kappa).abs().maxCoeff();
  return curve;
}

ClosedCurve make_circle(double radius, int grid) {
  if (radius <= 0.0) throw std::invalid_argument("radius must be > 0");
  if (grid < 8 || grid % 2 != 0) throw std::invalid_argument("grid must be even, >= 8");

  ClosedCurve curve;
  const double length = 2.0 * kPi * radius;
  curve.h = length / grid;
  curve.length = length;
  curve.sigma = ArrayXd::LinSpaced(grid, 0.0, length - curve.h);
  const ArrayXd theta = curve.sigma / radius;

  curve.tangent = ArrayX2d(grid, 2);
  curve.normal = ArrayX2d(grid, 2);
  curve.position = ArrayX2d(grid, 2);
  curve.tangent.col(0) = theta.cos();
  curve.tangent.col(1) = theta.sin();
  curve.normal.col(0) = curve.tangent.col(1);
  curve.normal.col(1) = -curve.tangent.col(0);
  curve.position.col(0) = radius * curve.normal.col(0);
  curve.position.col(1) = radius * curve.normal.col(1);

  curve.kappa = ArrayXd::Constant(grid, 1.0 / radius);
  curve.kappa_dot = ArrayXd::Zero(grid);
  curve.rho = ArrayXd::Constant(grid, kRhoNorm * std::exp(-radius * radius / 4.0));
  curve.weight_constant = curve.rho[0] * curve.kappa[0];
  curve.weight_constant_rel_var = 0.0;
  curve.closure_defect = 0.0;
  curve.shrinker_residual = std::fabs(radius / 2.0 - 1.0 / radius);
  curve.rotation_index = 1;
  curve.total_turning = 2.0 * kPi;
  curve.p = 1;
  curve.q = 1;
  curve.kappa_max = 1.0 / radius;
  return curve;
}

B1Routes compute_B1(const ClosedCurve& curve) {
  const ArrayXd k = curve.kappa;
  const ArrayXd kd = curve.kappa_dot;
  const double c = curve.weight_constant;

  B1Routes routes;
  routes.route_a =
      -fourier::integrate((k.pow(6) - 3.0 * k.square() * kd.square()) * curve.rho,
                          curve.length);
  routes.route_b =
      -c * fourier::integrate(k.pow(5) - 3.0 * k * kd.square(), curve.length);
  routes.route_c = -(c / 2.0) * fourier::integrate(k.pow(3), curve.length);
  return routes;
}

std::pair<IdentityPair, IdentityPair> integration_identity_check(
    const ClosedCurve& curve, int n) {
  if (n < 1) throw std::domain_error("integration identity requires n >= 1");
  const ArrayXd k = curve.kappa;
  const ArrayXd kd = curve.kappa_dot;
  const ArrayXd kdd = fourier::derivative(curve.kappa_dot, curve.length);

  IdentityPair first{fourier::integrate(kdd * k.pow(n), curve.length),
                     -n * fourier::integrate(kd.square() * k.pow(n - 1), curve.length)};

  IdentityPair second{0.0, 0.0};
  if (n >= 2) {
    second.lhs = -n * fourier::integrate(kd.square() * k.pow(n - 2), curve.length);
    second.rhs =
        fourier::integrate(0.5 * k.pow(n) - k.pow(n + 2), curve.length);
  } else {
    throw std::domain_error("second identity requires n >= 2");
  }
  return {first, second};
}

double gaussian_area(const ClosedCurve& curve) {
  return fourier::integrate(curve.rho, curve.length);
}

double ode_residual(const ClosedCurve& curve) {
  const ArrayXd kdd = fourier::derivative(curve.kappa_dot, curve.length);
  const ArrayXd res = kdd - curve.kappa_dot.square() / curve.kappa +
                      curve.kappa.pow(3) - 0.5 * curve.kappa;
  return res.abs().maxCoeff();
}

void write_curve_csv(const ClosedCurve& curve, const std::string& path) {
  const B1Routes b1 = compute_B1(curve);
  nlohmann::ordered_json header{
      {"p", curve.p},
      {"q", curve.q},
      {"kappa_max", curve.kappa_max},
      {"c", curve.weight_constant},
      {"B1_route_a", b1.route_a},
      {"B1_route_b", b1.route_b},
      {"B1_route_c", b1.route_c},
      {"closure_defect", curve.closure_defect},
      {"shrinker_residual", curve.shrinker_residual},
      {"rho_kappa_rel_var", curve.weight_constant_rel_var},
      {"length", curve.length},
      {"rotation_index", curve.rotation_index},
      {"version", kVersion},
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# " << header.dump() << "\n";
  out << "sigma,x1,x2,kappa,kappa_dot,rho\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    out << curve.sigma[i] << ',' << curve.position(i, 0) << ','
        << curve.position(i, 1) << ',' << curve.kappa[i] << ','
        << curve.kappa_dot[i] << ',' << curve.rho[i] << "\n";
  }
}

ClosedCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  nlohmann::json header;
  std::vector<std::array<double, 6>> rows;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find('{');
      if (pos != std::string::npos) header = nlohmann::json::parse(line.substr(pos));
      continue;
    }
    if (!seen_columns) {
      if (line != "sigma,x1,x2,kappa,kappa_dot,rho") {
        throw std::runtime_error("unexpected curve CSV columns: " + line);
      }
      seen_columns = true;
      continue;
    }
    std::array<double, 6> row{};
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c < 6; ++c) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short CSV row");
      row[static_cast<size_t>(c)] = std::stod(cell);
    }
    rows.push_back(row);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < 8 || n % 2 != 0) throw std::runtime_error("curve CSV needs an even sample count >= 8");

  ClosedCurve curve;
  curve.sigma = ArrayXd(n);
  curve.position = ArrayX2d(n, 2);
  curve.kappa = ArrayXd(n);
  curve.kappa_dot = ArrayXd(n);
  curve.rho = ArrayXd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<size_t>(i)];
    curve.sigma[i] = r[0];
    curve.position(i, 0) = r[1];
    curve.position(i, 1) = r[2];
    curve.kappa[i] = r[3];
    curve.kappa_dot[i] = r[4];
    curve.rho[i] = r[5];
  }
  curve.h = curve.sigma[1] - curve.sigma[0];
  curve.length = curve.h * static_cast<double>(n);

  // Rebuild the frame spectrally from positions; sigma is arclength.
  ArrayXd t0 = fourier::derivative(curve.position.col(0), curve.length);
  ArrayXd t1 = fourier::derivative(curve.position.col(1), curve.length);
  const ArrayXd speed = (t0.square() + t1.square()).sqrt();
  curve.tangent = ArrayX2d(n, 2);
  curve.normal = ArrayX2d(n, 2);
  curve.tangent.col(0) = t0 / speed;
  curve.tangent.col(1) = t1 / speed;
  curve.normal.col(0) = curve.tangent.col(1);
  curve.normal.col(1) = -curve.tangent.col(0);

  const ArrayXd rho_kappa = curve.rho * curve.kappa;
  curve.weight_constant = rho_kappa.mean();
  curve.weight_constant_rel_var =
      ((rho_kappa / curve.weight_constant) - 1.0).abs().maxCoeff();
  const ArrayXd xn = curve.position.col(0) * curve.normal.col(0) +
                     curve.position.col(1) * curve.normal.col(1);
  curve.shrinker_residual = (0.5 * xn - curve.kappa).abs().maxCoeff();
  curve.total_turning = fourier::integrate(curve.kappa, curve.length);
  curve.rotation_index =
      static_cast<int>(std::round(curve.total_turning / (2.0 * kPi)));
  if (header.contains("p")) curve.p = header["p"].get<int>();
  if (header.contains("q")) curve.q = header["q"].get<int>();
  if (header.contains("kappa_max")) curve.kappa_max = header["kappa_max"].get<double>();
  if (header.contains("closure_defect")) {
    curve.closure_defect = header["closure_defect"].get<double>();
  }
  return curve;
}

}  // namespace shrinklab::alcurve
