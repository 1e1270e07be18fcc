#pragma once

#include "shrinklab/alcurve.hpp"

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

// Rescaled curve shortening flow (normal velocity = the shrinker quantity)
// for closed curves written as radial graphs r(theta) over the circle. In
// this representation the flow reads
//   r_s = r/2 - (r^2 + 2 r_theta^2 - r r_thetatheta) / (r (r^2 + r_theta^2)),
// with the round circle of radius sqrt(2) as the stationary point; its
// linearization decays mode j at rate 1 - j^2/2. Time stepping is
// semi-implicit: the second-derivative term is stabilized implicitly in
// Fourier space with a frozen coefficient, the rest is explicit.

namespace shrinklab::flow {

using Eigen::ArrayXd;

struct FlowError : std::runtime_error {
  double s;
  FlowError(const std::string& what, double time) : std::runtime_error(what), s(time) {}
};

enum class Stabilization { none, recenter, project_unstable };

struct FlowConfig {
  double dt = 1e-3;
  int steps = 2000;
  Stabilization stabilization = Stabilization::project_unstable;
  std::vector<int> modes;          // initial perturbation modes
  std::vector<double> amplitudes;  // matching amplitudes
  int grid_size = 256;             // even, >= 64
  int sample_every = 10;
  double phi_floor = 0.0;  // stop early when ||phi|| drops below (0 = run out steps)
  int tracked_modes = 8;

  void validate() const;
};

struct FlowState {
  double s = 0.0;
  ArrayXd r;  // radius samples over the uniform theta grid
  double F = 0.0;
  double phi_l2 = 0.0;
  double shrinker_scale = 0.0;  // sqrt(-2 ln ||phi||^2); inf when phi ~ 0
  ArrayXd mode_amplitudes;
};

// Diagnostics (F, ||phi||, scale, amplitudes) recomputed from r.
FlowState make_state(const ArrayXd& r, double s, int tracked_modes);
FlowState make_initial(const FlowConfig& config);

FlowState rmcf_step(const FlowState& state, const FlowConfig& config);

struct Trajectory {
  std::vector<FlowState> states;
  FlowConfig config;
  bool stopped_at_floor = false;
  double f_increase_total = 0.0;  // sum of positive F jumps between samples

  const FlowState& back() const { return states.back(); }
};

Trajectory simulate(const FlowConfig& config);

struct EnergyIdentityReport {
  double max_rel_mismatch = 0.0;  // | dF/ds + ||phi||^2 | / ||phi||^2, interior samples
  double median_rel_mismatch = 0.0;
  int samples_used = 0;
};
EnergyIdentityReport energy_identity_check(const Trajectory& traj);

// Mismatch decay order between a run and its half-step rerun.
double energy_identity_order(const Trajectory& coarse, const Trajectory& fine);

struct RateFit {
  double rate = 0.0;
  int points = 0;
  double amp_first = 0.0, amp_last = 0.0;
};
// Least-squares slope of log(mode amplitude) over the linear-regime window;
// throws std::runtime_error when the amplitude sits below the noise floor.
RateFit decay_rate_fit(const Trajectory& traj, int mode, double window_hi = 2e-2,
                       double window_lo = 1e-9);

struct LojaBoundReport {
  double C = 0.0;         // gap <= C ||phi||^{3/2} constant used
  double c_fitted = 0.0;  // min ||phi||^2 / gap^{4/3} along the trajectory
  bool inequality_ok = false;
  bool ode_bound_ok = false;
  double worst_margin = 0.0;  // max gap/bound ratio observed
};
// Checks F(s) - F_limit against C ||phi||^{3/2} and against the comparison
// solution (c s/3 + gap(0)^{-1/3})^{-3} of g' = -c g^{4/3}.
LojaBoundReport lojasiewicz_rate_bound_check(const Trajectory& traj, double C,
                                             double F_limit);

// Curve view of a flow state (for checkpointing via the curve CSV format).
alcurve::ClosedCurve state_to_curve(const FlowState& state);
// Radial graph of a stored curve about the origin; requires star-shapedness.
FlowState curve_to_state(const alcurve::ClosedCurve& curve, double s, int tracked_modes);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace shrinklab::flow
