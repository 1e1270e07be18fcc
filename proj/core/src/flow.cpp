#include "shrinklab/flow.hpp"

#include "shrinklab/fourier.hpp"
#include "shrinklab/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

namespace shrinklab::flow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kRhoNorm = 0.28209479177387814347;  // (4 pi)^{-1/2}
constexpr double kSqrt2 = 1.41421356237309504880;

struct RadialGeometry {
  ArrayXd r_t, r_tt, speed2, speed, kappa, phi, rho, dm;
  double F = 0.0;
  double phi_l2 = 0.0;
};

RadialGeometry radial_geometry(const ArrayXd& r) {
  RadialGeometry g;
  g.r_t = fourier::derivative(r, kTwoPi);
  g.r_tt = fourier::derivative(r, kTwoPi, 2);
  g.speed2 = r.square() + g.r_t.square();
  g.speed = g.speed2.sqrt();
  g.kappa = (r.square() + 2.0 * g.r_t.square() - r * g.r_tt) / g.speed2.pow(1.5);
  g.phi = 0.5 * r.square() / g.speed - g.kappa;
  g.rho = kRhoNorm * (-r.square() / 4.0).exp();
  const double h = kTwoPi / static_cast<double>(r.size());
  g.dm = g.rho * g.speed * h;
  g.F = g.dm.sum();
  g.phi_l2 = std::sqrt((g.phi.square() * g.dm).sum());
  return g;
}

void check_state(const ArrayXd& r, const RadialGeometry& g, double s) {
  if (!r.allFinite()) throw FlowError("flow produced non-finite radii", s);
  if (r.minCoeff() < 0.05) {
    throw FlowError("radial graph degenerating (min radius " +
                        std::to_string(r.minCoeff()) + ")",
                    s);
  }
  if (g.kappa.abs().maxCoeff() > 1e4) {
    throw FlowError("curvature blow-up (max |kappa| " +
                        std::to_string(g.kappa.abs().maxCoeff()) + ")",
                    s);
  }
}

ArrayXd recenter(const ArrayXd& r, const RadialGeometry& g) {
  const Eigen::Index n = r.size();
  const double h = kTwoPi / static_cast<double>(n);
  ArrayXd theta(n);
  for (Eigen::Index i = 0; i < n; ++i) theta[i] = h * static_cast<double>(i);

  const ArrayXd x = r * theta.cos();
  const ArrayXd y = r * theta.sin();
  const double mass = g.dm.sum();
  const double cx = (x * g.dm).sum() / mass;
  const double cy = (y * g.dm).sum() / mass;

  const ArrayXd px = x - cx;
  const ArrayXd py = y - cy;
  const ArrayXd r_shift = (px.square() + py.square()).sqrt();
  ArrayXd delta(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double d = std::atan2(py[i], px[i]) - theta[i];
    while (d > kPi) d -= kTwoPi;
    while (d < -kPi) d += kTwoPi;
    delta[i] = d;
  }

  // Invert theta + delta(theta) = target by fixed point, then resample radii.
  ArrayXd t = theta;
  for (int it = 0; it < 8; ++it) {
    const ArrayXd d_at = fourier::resample_periodic(delta, t, kTwoPi);
    t = theta - d_at;
  }
  return fourier::resample_periodic(r_shift, t, kTwoPi);
}

}  // namespace

void FlowConfig::validate() const {
  if (dt <= 0.0 || dt > 0.05) throw std::invalid_argument("dt must be in (0, 0.05]");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (grid_size < 64 || grid_size % 2 != 0) {
    throw std::invalid_argument("grid_size must be even and >= 64");
  }
  if (modes.size() != amplitudes.size()) {
    throw std::invalid_argument("modes and amplitudes must have equal length");
  }
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
}

FlowState make_state(const ArrayXd& r, double s, int tracked_modes) {
  const RadialGeometry g = radial_geometry(r);
  FlowState st;
  st.s = s;
  st.r = r;
  st.F = g.F;
  st.phi_l2 = g.phi_l2;
  if (g.phi_l2 < 1e-15) {
    st.shrinker_scale = std::numeric_limits<double>::infinity();
  } else if (g.phi_l2 < 1.0) {
    st.shrinker_scale = std::sqrt(-2.0 * std::log(g.phi_l2 * g.phi_l2));
  } else {
    st.shrinker_scale = 0.0;
  }
  st.mode_amplitudes = fourier::mode_amplitudes(r - kSqrt2, tracked_modes);
  return st;
}

FlowState make_initial(const FlowConfig& config) {
  config.validate();
  const int n = config.grid_size;
  const double h = kTwoPi / n;
  ArrayXd r = ArrayXd::Constant(n, kSqrt2);
  for (size_t m = 0; m < config.modes.size(); ++m) {
    const double j = config.modes[m];
    for (int i = 0; i < n; ++i) r[i] += config.amplitudes[m] * std::cos(j * h * i);
  }
  return make_state(r, 0.0, config.tracked_modes);
}

FlowState rmcf_step(const FlowState& state, const FlowConfig& config) {
  const Eigen::Index n = state.r.size();
  const RadialGeometry g = radial_geometry(state.r);
  check_state(state.r, g, state.s);

  // Radial velocity; the normal speed is phi, the radial factor speed/r.
  const ArrayXd rhs =
      0.5 * state.r -
      (state.r.square() + 2.0 * g.r_t.square() - state.r * g.r_tt) /
          (state.r * g.speed2);

  // Stabilized splitting: r_s = nu r_tt + (rhs - nu r_tt) with the first
  // term implicit in Fourier space and nu a frozen bound on the diffusion
  // coefficient 1/(r^2 + r_t^2).
  const double nu = (1.0 / g.speed2).maxCoeff();

  Eigen::ArrayXcd rh = fourier::spectrum(state.r);
  Eigen::ArrayXcd gh = fourier::spectrum(rhs);
  Eigen::ArrayXcd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double k = static_cast<double>((j <= n / 2) ? j : j - n);
    const double k2 = k * k;
    out[j] = (rh[j] + config.dt * (gh[j] + nu * k2 * rh[j])) / (1.0 + config.dt * nu * k2);
  }

  if (config.stabilization == Stabilization::project_unstable) {
    out[0] = rh[0];
    out[1] = rh[1];
    out[n - 1] = rh[n - 1];
  }

  ArrayXd r_new = fourier::inverse_spectrum(out);
  if (config.stabilization == Stabilization::recenter) {
    r_new = recenter(r_new, radial_geometry(r_new));
  }

  const double s_new = state.s + config.dt;
  if (!r_new.allFinite() || r_new.minCoeff() < 0.05) {
    throw FlowError("flow step left the radial-graph regime", s_new);
  }
  return make_state(r_new, s_new, config.tracked_modes);
}

Trajectory simulate(const FlowConfig& config) {
  config.validate();
  Trajectory traj;
  traj.config = config;

  FlowState cur = make_initial(config);
  traj.states.push_back(cur);
  double prev_f = cur.F;

  for (int step = 1; step <= config.steps; ++step) {
    cur = rmcf_step(cur, config);
    if (cur.F > prev_f) traj.f_increase_total += cur.F - prev_f;
    prev_f = cur.F;
    if (step % config.sample_every == 0 || step == config.steps) {
      traj.states.push_back(cur);
    }
    if (config.phi_floor > 0.0 && cur.phi_l2 < config.phi_floor) {
      if (traj.states.back().s != cur.s) traj.states.push_back(cur);
      traj.stopped_at_floor = true;
      break;
    }
  }
  return traj;
}

EnergyIdentityReport energy_identity_check(const Trajectory& traj) {
  const auto& st = traj.states;
  if (st.size() < 3) throw std::invalid_argument("trajectory too short");

  double peak = 0.0;
  for (const auto& s : st) peak = std::max(peak, s.phi_l2 * s.phi_l2);

  std::vector<double> mism;
  for (size_t i = 1; i + 1 < st.size(); ++i) {
    const double p2 = st[i].phi_l2 * st[i].phi_l2;
    if (p2 < 1e-6 * peak || p2 <= 0.0) continue;
    const double dfds = (st[i + 1].F - st[i - 1].F) / (st[i + 1].s - st[i - 1].s);
    mism.push_back(std::fabs(dfds + p2) / p2);
  }
  EnergyIdentityReport rep;
  rep.samples_used = static_cast<int>(mism.size());
  if (mism.empty()) return rep;
  rep.max_rel_mismatch = *std::max_element(mism.begin(), mism.end());
  std::nth_element(mism.begin(), mism.begin() + mism.size() / 2, mism.end());
  rep.median_rel_mismatch = mism[mism.size() / 2];
  return rep;
}

double energy_identity_order(const Trajectory& coarse, const Trajectory& fine) {
  const double mc = energy_identity_check(coarse).median_rel_mismatch;
  const double mf = energy_identity_check(fine).median_rel_mismatch;
  if (mc <= 0.0 || mf <= 0.0) return 0.0;
  return std::log2(mc / mf);
}

RateFit decay_rate_fit(const Trajectory& traj, int mode, double window_hi,
                       double window_lo) {
  const auto& st = traj.states;
  if (st.empty() || mode >= st.front().mode_amplitudes.size()) {
    throw std::invalid_argument("decay_rate_fit: mode not tracked");
  }
  if (st.front().mode_amplitudes[mode] < 10.0 * window_lo) {
    throw std::runtime_error("decay_rate_fit: amplitude below noise floor");
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  RateFit fit;
  for (size_t i = 2; i < st.size(); ++i) {  // skip the splitting transient
    const double a = st[i].mode_amplitudes[mode];
    if (a < window_lo || a > window_hi) continue;
    const double lx = st[i].s;
    const double ly = std::log(a);
    if (m == 0) fit.amp_first = a;
    fit.amp_last = a;
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 5) throw std::runtime_error("decay_rate_fit: too few samples in window");
  fit.rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.points = m;
  return fit;
}

LojaBoundReport lojasiewicz_rate_bound_check(const Trajectory& traj, double C,
                                             double F_limit) {
  const auto& st = traj.states;
  if (st.size() < 3) throw std::invalid_argument("trajectory too short");
  const double gap0 = st.front().F - F_limit;
  const double gap_end = st.back().F - F_limit;
  if (gap0 <= 0.0 || gap_end > 0.9 * gap0) {
    throw std::invalid_argument("lojasiewicz_rate_bound_check: trajectory not converging");
  }

  LojaBoundReport rep;
  rep.C = C;
  rep.c_fitted = std::numeric_limits<double>::infinity();
  for (const auto& s : st) {
    const double gap = s.F - F_limit;
    if (gap < 1e-14) continue;
    rep.c_fitted = std::min(rep.c_fitted,
                            s.phi_l2 * s.phi_l2 / std::pow(gap, 4.0 / 3.0));
  }

  rep.inequality_ok = true;
  rep.ode_bound_ok = true;
  const double s0 = st.front().s;
  for (const auto& s : st) {
    const double gap = s.F - F_limit;
    if (gap < 1e-14) continue;
    const double ineq_bound = C * std::pow(s.phi_l2, 1.5);
    if (ineq_bound > 0.0) {
      rep.worst_margin = std::max(rep.worst_margin, gap / ineq_bound);
    }
    if (gap > ineq_bound * (1.0 + 1e-9)) rep.inequality_ok = false;
    const double comp =
        std::pow(rep.c_fitted * (s.s - s0) / 3.0 + std::pow(gap0, -1.0 / 3.0), -3.0);
    if (gap > comp * (1.0 + 1e-9)) rep.ode_bound_ok = false;
  }
  return rep;
}

alcurve::ClosedCurve state_to_curve(const FlowState& state) {
  const Eigen::Index n = state.r.size();
  const RadialGeometry g = radial_geometry(state.r);
  const double h_t = kTwoPi / static_cast<double>(n);

  // Resample to uniform arclength: invert the cumulative arclength function.
  double mean_speed = 0.0;
  const ArrayXd sigma_of_t = fourier::antiderivative(g.speed, kTwoPi, &mean_speed);
  const double length = mean_speed * kTwoPi;
  const double h_s = length / static_cast<double>(n);

  ArrayXd theta(n);
  for (Eigen::Index i = 0; i < n; ++i) theta[i] = h_t * static_cast<double>(i);
  const ArrayXd ramp_free = sigma_of_t - mean_speed * theta;  // periodic part

  ArrayXd t = theta;  // initial guess: sigma proportional to theta
  for (int it = 0; it < 12; ++it) {
    const ArrayXd periodic = fourier::resample_periodic(ramp_free, t, kTwoPi);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double target = h_s * static_cast<double>(i);
      t[i] = (target - periodic[i]) / mean_speed;
    }
  }

  const ArrayXd r_at = fourier::resample_periodic(state.r, t, kTwoPi);
  alcurve::ClosedCurve curve;
  curve.sigma = ArrayXd::LinSpaced(n, 0.0, length - h_s);
  curve.h = h_s;
  curve.length = length;
  curve.position = Eigen::ArrayX2d(n, 2);
  curve.position.col(0) = r_at * t.cos();
  curve.position.col(1) = r_at * t.sin();

  const ArrayXd d0 = fourier::derivative(curve.position.col(0), length);
  const ArrayXd d1 = fourier::derivative(curve.position.col(1), length);
  const ArrayXd dd0 = fourier::derivative(curve.position.col(0), length, 2);
  const ArrayXd dd1 = fourier::derivative(curve.position.col(1), length, 2);
  const ArrayXd speed = (d0.square() + d1.square()).sqrt();
  curve.tangent = Eigen::ArrayX2d(n, 2);
  curve.tangent.col(0) = d0 / speed;
  curve.tangent.col(1) = d1 / speed;
  curve.normal = Eigen::ArrayX2d(n, 2);
  curve.normal.col(0) = curve.tangent.col(1);
  curve.normal.col(1) = -curve.tangent.col(0);
  curve.kappa = (d0 * dd1 - d1 * dd0) / speed.cube();
  curve.kappa_dot = fourier::derivative(curve.kappa, length);
  const ArrayXd r2 = curve.position.col(0).square() + curve.position.col(1).square();
  curve.rho = kRhoNorm * (-r2 / 4.0).exp();

  const ArrayXd rho_kappa = curve.rho * curve.kappa;
  curve.weight_constant = rho_kappa.mean();
  curve.weight_constant_rel_var =
      ((rho_kappa / curve.weight_constant) - 1.0).abs().maxCoeff();
  const ArrayXd xn = curve.position.col(0) * curve.normal.col(0) +
                     curve.position.col(1) * curve.normal.col(1);
  curve.shrinker_residual = (0.5 * xn - curve.kappa).abs().maxCoeff();
  curve.total_turning = fourier::integrate(curve.kappa, length);
  curve.rotation_index = static_cast<int>(std::round(curve.total_turning / kTwoPi));
  curve.p = curve.rotation_index;
  curve.q = 1;
  curve.kappa_max = curve.kappa.maxCoeff();
  return curve;
}

FlowState curve_to_state(const alcurve::ClosedCurve& curve, double s, int tracked_modes) {
  const Eigen::Index n = curve.size();
  ArrayXd angles(n), radii(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    angles[i] = std::atan2(curve.position(i, 1), curve.position(i, 0));
    radii[i] = std::hypot(curve.position(i, 0), curve.position(i, 1));
  }
  // Unwrap and check the curve is a radial graph about the origin.
  ArrayXd unwrapped = angles;
  for (Eigen::Index i = 1; i < n; ++i) {
    double d = unwrapped[i] - unwrapped[i - 1];
    while (d > kPi) d -= kTwoPi;
    while (d < -kPi) d += kTwoPi;
    unwrapped[i] = unwrapped[i - 1] + d;
    if (d <= 0.0) {
      throw FlowError("radial angle not monotone; not a radial graph", s);
    }
  }
  double d_close = angles[0] - angles[n - 1];
  while (d_close > kPi) d_close -= kTwoPi;
  while (d_close < -kPi) d_close += kTwoPi;
  const double winding = (unwrapped[n - 1] - unwrapped[0] + d_close) / kTwoPi;
  if (std::fabs(winding - 1.0) > 1e-6) {
    throw FlowError("curve winds the origin more than once; not a radial graph", s);
  }

  const double h_t = kTwoPi / static_cast<double>(n);
  const ArrayXd theta0 = unwrapped - unwrapped[0];
  const ArrayXd delta = theta0 - ArrayXd::LinSpaced(n, 0.0, h_t * (n - 1));
  ArrayXd t = ArrayXd::LinSpaced(n, 0.0, h_t * (n - 1));
  for (int it = 0; it < 12; ++it) {
    const ArrayXd d_at = fourier::resample_periodic(delta, t, kTwoPi);
    for (Eigen::Index i = 0; i < n; ++i) {
      t[i] = h_t * static_cast<double>(i) - d_at[i];
    }
  }
  ArrayXd r_uniform = fourier::resample_periodic(radii, t, kTwoPi);

  // The uniform grid is in the rotated frame theta' = theta - angles[0];
  // rotating the curve does not change any reported diagnostic.
  return make_state(r_uniform, s, tracked_modes);
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  nlohmann::ordered_json header{
      {"dt", traj.config.dt},
      {"steps", traj.config.steps},
      {"grid_size", traj.config.grid_size},
      {"stabilization", static_cast<int>(traj.config.stabilization)},
      {"modes", traj.config.modes},
      {"amplitudes", traj.config.amplitudes},
      {"sample_every", traj.config.sample_every},
      {"f_increase_total", traj.f_increase_total},
      {"version", kVersion},
  };
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# " << header.dump() << "\n";
  out << "s,F,phi_l2,shrinker_scale";
  const int tracked = traj.states.empty()
                          ? 0
                          : static_cast<int>(traj.states.front().mode_amplitudes.size());
  for (int j = 0; j < tracked; ++j) out << ",amp" << j;
  out << "\n";
  out.precision(17);
  for (const auto& st : traj.states) {
    out << st.s << ',' << st.F << ',' << st.phi_l2 << ',' << st.shrinker_scale;
    for (int j = 0; j < tracked; ++j) out << ',' << st.mode_amplitudes[j];
    out << "\n";
  }
}

}  // namespace shrinklab::flow
