#include "shrinklab/report.hpp"

#include "shrinklab/alcurve.hpp"
#include "shrinklab/flow.hpp"
#include "shrinklab/gauss.hpp"
#include "shrinklab/obstruction.hpp"
#include "shrinklab/spectral.hpp"
#include "shrinklab/variation.hpp"
#include "shrinklab/version.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace shrinklab::report {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846;
const double kCircleArea = std::sqrt(2.0 * kPi) * std::exp(-0.5);

ReportRow row_eq(const std::string& id, const std::string& anchor, double value,
                 double expected, double tol) {
  ReportRow r{id, anchor, value, expected, tol, false};
  r.pass = std::isfinite(value) && std::fabs(value - expected) <= tol;
  return r;
}

ReportRow row_bound(const std::string& id, const std::string& anchor, double value,
                    double tol) {
  // value must be <= tol
  ReportRow r{id, anchor, value, kNaN, tol, false};
  r.pass = std::isfinite(value) && value <= tol;
  return r;
}

ReportRow row_flag(const std::string& id, const std::string& anchor, bool ok) {
  ReportRow r{id, anchor, ok ? 1.0 : 0.0, 1.0, 0.0, ok};
  return r;
}

struct SharedState {
  // Cached expensive artifacts reused across criteria in one battery run.
  bool have_al = false;
  alcurve::ClosedCurve al23;
  double loja_C = 0.0;  // single ensemble constant from the gradient check
  bool have_loja_C = false;
};

alcurve::ClosedCurve& get_al23(SharedState& shared) {
  if (!shared.have_al) {
    const auto profile = alcurve::find_closed_curve(2, 3, {0.72, 3.0}, 512);
    shared.al23 = alcurve::reconstruct_curve(profile);
    shared.have_al = true;
  }
  return shared.al23;
}

Eigen::MatrixXd random_symmetric(int dim, std::mt19937_64& rng) {
  auto uniform = [&rng]() {
    return 2.0 * std::ldexp(static_cast<double>(rng()), -64) - 1.0;
  };
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      a(i, j) = uniform();
      a(j, i) = a(i, j);
    }
  }
  return a;
}

// ---------------------------------------------------------------- AC-1
CriterionResult criterion_moments(const AcceptanceOptions& opts) {
  CriterionResult res;
  res.id = "AC-1";
  res.title = "moment table, exact and by quadrature";

  struct TableEntry {
    std::vector<int> alpha;
    std::int64_t expected;
  };
  std::vector<TableEntry> table = {
      {{0}, 1},       {{2}, 2},       {{4}, 12},     {{6}, 120},
      {{2, 2}, 4},    {{4, 2}, 24},   {{2, 2, 2}, 8},
  };
  if (opts.fault_injection == "moment-table") table[3].expected = 125;

  for (const auto& e : table) {
    const auto got = gauss::gaussian_moment_exact(gauss::MultiIndex(e.alpha));
    std::string name = "table(";
    for (size_t i = 0; i < e.alpha.size(); ++i) {
      name += (i ? "," : "") + std::to_string(e.alpha[i]);
    }
    name += ")";
    ReportRow r{name, "moment-table", static_cast<double>(got),
                static_cast<double>(e.expected), 0.0,
                got == e.expected};
    res.rows.push_back(r);
  }

  // Quadrature oracle for all even multi-indices, |alpha| <= 8, dim <= 3.
  double worst = 0.0;
  for (int dim = 1; dim <= 3; ++dim) {
    const auto rule = gauss::gauss_hermite_rule(dim, 5);
    std::vector<int> alpha(static_cast<size_t>(dim), 0);
    std::function<void(int, int)> visit = [&](int pos, int remaining) {
      if (pos == dim) {
        const gauss::MultiIndex mi(alpha);
        const double exact = gauss::gaussian_moment(mi);
        const double quad = gauss::moment_by_quadrature(mi, rule);
        worst = std::max(worst, std::fabs(exact - quad));
        return;
      }
      for (int e = 0; e <= remaining; e += 2) {
        alpha[static_cast<size_t>(pos)] = e;
        visit(pos + 1, remaining - e);
      }
    };
    visit(0, 8);
  }
  res.rows.push_back(row_bound("quadrature-agreement", "moment-oracle", worst, 1e-10));

  res.pass = true;
  for (const auto& r : res.rows) res.pass = res.pass && r.pass;
  return res;
}

// ---------------------------------------------------------------- AC-2
CriterionResult criterion_bruteforce(const AcceptanceOptions& opts) {
  CriterionResult res;
  res.id = "AC-2";
  res.title = "quadratic projection, brute force vs closed form";

  std::mt19937_64 rng(opts.seed);
  double worst = 0.0;
  for (int dim = 1; dim <= 4; ++dim) {
    for (int trial = 0; trial < 1000; ++trial) {
      const obstruction::QuadCoeffs coeffs(random_symmetric(dim, rng));
      for (int b = 0; b < dim; ++b) {
        const double brute = obstruction::quadratic_projection_bruteforce(coeffs, b);
        const double expected = 64.0 * coeffs.row_sum_squares(b);
        worst = std::max(worst, std::fabs(brute - expected));
      }
    }
  }
  res.rows.push_back(
      row_bound("bruteforce-identity", "projection-coefficient", worst, 1e-10));
  res.pass = res.rows.back().pass;
  return res;
}

// ---------------------------------------------------------------- AC-3
CriterionResult criterion_lower_bound(const AcceptanceOptions& opts) {
  CriterionResult res;
  res.id = "AC-3";
  res.title = "obstruction lower bound";

  std::mt19937_64 rng(opts.seed + 1);
  int violations = 0;
  double worst_dim1_eq = 0.0;
  for (int dim = 1; dim <= 4; ++dim) {
    const auto inv = obstruction::sphere_cross_section(1, dim);
    for (int trial = 0; trial < 1000; ++trial) {
      const obstruction::QuadCoeffs coeffs(random_symmetric(dim, rng));
      if (coeffs.sum_squares() == 0.0) continue;
      const auto lb = obstruction::obstruction_lower_bound(coeffs, inv);
      if (lb.lhs < lb.rhs * (1.0 - 1e-12)) ++violations;
      if (dim == 1) {
        worst_dim1_eq = std::max(
            worst_dim1_eq, std::fabs(lb.lhs - lb.rhs) / std::max(1.0, std::fabs(lb.lhs)));
      }
    }
  }
  res.rows.push_back(row_eq("violations", "lower-bound", violations, 0.0, 0.0));
  res.rows.push_back(row_bound("dim1-equality", "lower-bound", worst_dim1_eq, 1e-12));
  res.pass = res.rows[0].pass && res.rows[1].pass;
  return res;
}

// ---------------------------------------------------------------- AC-4
CriterionResult criterion_curves(SharedState& shared) {
  CriterionResult res;
  res.id = "AC-4";
  res.title = "shrinker curve construction";

  const auto& al = get_al23(shared);
  res.rows.push_back(row_bound("al23-closure", "closure-defect", al.closure_defect, 1e-8));
  res.rows.push_back(
      row_bound("al23-residual", "shrinker-identity", al.shrinker_residual, 1e-7));
  res.rows.push_back(row_bound("al23-weight-relation", "rho-kappa-constant",
                               al.weight_constant_rel_var, 1e-8));

  const auto routes = alcurve::compute_B1(al);
  const double route_spread =
      std::max({std::fabs(routes.route_a - routes.route_b),
                std::fabs(routes.route_a - routes.route_c),
                std::fabs(routes.route_b - routes.route_c)});
  res.rows.push_back(row_bound("al23-B1-routes", "B1-route-agreement", route_spread, 1e-6));
  res.rows.push_back(row_flag("al23-B1-negative", "B1-sign",
                              routes.route_a < 0.0 && routes.route_b < 0.0 &&
                                  routes.route_c < 0.0));

  const auto circle = alcurve::make_circle(alcurve::kSqrt2, 512);
  res.rows.push_back(row_eq("circle-area", "gaussian-area",
                            alcurve::gaussian_area(circle), kCircleArea, 1e-9));
  const auto circle_b1 = alcurve::compute_B1(circle);
  res.rows.push_back(
      row_eq("circle-B1", "B1-closed-form", circle_b1.route_a, -kCircleArea / 8.0, 1e-9));

  res.pass = true;
  for (const auto& r : res.rows) res.pass = res.pass && r.pass;
  return res;
}

// ---------------------------------------------------------------- AC-5
CriterionResult criterion_assumptions(SharedState& shared) {
  CriterionResult res;
  res.id = "AC-5";
  res.title = "spectral conditions on circle and closed curve";

  spectral::AssumptionOptions aopts;  // identity 1e-5, angle 1e-5 as pinned

  const auto circle = alcurve::make_circle(alcurve::kSqrt2, 512);
  const auto rep_c = spectral::verify_assumptions(circle, aopts);
  res.rows.push_back(row_bound("circle-coordinate-residual", "first-condition",
                               std::max(rep_c.a1.residual_x1, rep_c.a1.residual_x2),
                               aopts.identity_tol));
  res.rows.push_back(
      row_eq("circle-half-cluster", "first-condition", rep_c.a1.half_cluster_dim, 2, 0.0));
  res.rows.push_back(row_bound("circle-subspace-angle", "first-condition",
                               rep_c.a1.subspace_angle, aopts.angle_tol));
  res.rows.push_back(row_bound(
      "circle-identity-residuals", "second-condition",
      std::max({rep_c.a2.res_dilation, rep_c.a2.res_translation_x1,
                rep_c.a2.res_translation_x2}),
      aopts.identity_tol));
  res.rows.push_back(row_flag("circle-multiplicities", "second-condition",
                              rep_c.a2.mult_one == 1 && rep_c.a2.mult_half == 2 &&
                                  rep_c.a2.mult_zero == 0 &&
                                  rep_c.a2.nearest_to_zero > 0.1));

  const auto& al = get_al23(shared);
  const auto rep_a = spectral::verify_assumptions(al, aopts);
  res.rows.push_back(row_bound("al23-coordinate-residual", "first-condition",
                               std::max(rep_a.a1.residual_x1, rep_a.a1.residual_x2),
                               aopts.identity_tol));
  res.rows.push_back(
      row_eq("al23-half-cluster", "first-condition", rep_a.a1.half_cluster_dim, 2, 0.0));
  res.rows.push_back(row_bound("al23-subspace-angle", "first-condition",
                               rep_a.a1.subspace_angle, aopts.angle_tol));
  res.rows.push_back(row_bound(
      "al23-identity-residuals", "second-condition",
      std::max({rep_a.a2.res_dilation, rep_a.a2.res_translation_x1,
                rep_a.a2.res_translation_x2, rep_a.a2.res_rotation}),
      aopts.identity_tol));
  res.rows.push_back(row_flag("al23-multiplicities", "second-condition",
                              rep_a.a2.mult_one == 1 && rep_a.a2.mult_half == 2 &&
                                  rep_a.a2.mult_zero == 1));
  res.rows.push_back(
      row_flag("multiplicity-bound", "second-condition",
               rep_c.a2.max_multiplicity <= 2 && rep_a.a2.max_multiplicity <= 2));

  res.pass = true;
  for (const auto& r : res.rows) res.pass = res.pass && r.pass;
  return res;
}

// ---------------------------------------------------------------- AC-6
CriterionResult criterion_variation(SharedState& shared) {
  CriterionResult res;
  res.id = "AC-6";
  res.title = "variation formulas against finite differences";

  const auto circle = alcurve::make_circle(alcurve::kSqrt2, 256);
  const Eigen::ArrayXd theta = circle.sigma / alcurve::kSqrt2;
  const std::vector<double> eps_list{1e-2, 5e-3, 2.5e-3};

  struct Direction {
    std::string name;
    Eigen::ArrayXd values;
  };
  const std::vector<Direction> dirs = {
      {"mode0", Eigen::ArrayXd::Ones(circle.size())},
      {"mode1", theta.cos()},
      {"mode2", (2.0 * theta).cos()},
  };

  for (const auto& d : dirs) {
    const auto v = variation::NormalField::from_values(circle, d.values);
    const auto rep = variation::first_variation_check(circle, v, eps_list);
    res.rows.push_back(row_eq("fv-slope-" + d.name, "first-variation", rep.slope, 1.0, 0.1));
    res.rows.push_back(
        row_bound("fv-limit-" + d.name, "first-variation", rep.limit_error, 1e-6));
  }

  // Mixed-mode direction for the expansion orders.
  const Eigen::ArrayXd mixed =
      0.4 * Eigen::ArrayXd::Ones(circle.size()) + (2.0 * theta).cos() +
      0.3 * (3.0 * theta).sin();
  const auto vm = variation::NormalField::from_values(circle, mixed);
  const auto taylor = variation::taylor_remainder_check(circle, vm, eps_list);
  res.rows.push_back(row_flag("taylor-slope1", "expansion-order-1",
                              taylor.slope1 >= 1.9));
  res.rows.push_back(row_flag("taylor-slope2", "expansion-order-2",
                              taylor.slope2 >= 2.85));

  const auto sv_circle = variation::second_variation_check(circle, vm, eps_list);
  res.rows.push_back(row_bound("sv-circle", "second-variation", sv_circle.normal_error,
                               sv_circle.budget));

  const auto& al = get_al23(shared);
  const auto v_al = variation::NormalField::from_values(al, al.kappa);
  const auto sv_al = variation::second_variation_check(al, v_al, eps_list);
  res.rows.push_back(
      row_bound("sv-al23", "second-variation", sv_al.normal_error, sv_al.budget));

  res.pass = true;
  for (const auto& r : res.rows) res.pass = res.pass && r.pass;
  return res;
}

// ---------------------------------------------------------------- AC-7
CriterionResult criterion_lojasiewicz(SharedState& shared,
                                      const AcceptanceOptions& opts) {
  CriterionResult res;
  res.id = "AC-7";
  res.title = "gradient inequality on random ensembles";

  variation::LojaOptions lopts;
  lopts.directions = 40;
  lopts.eps_per_direction = 7;
  lopts.seed = opts.seed + 11;

  const auto circle = alcurve::make_circle(alcurve::kSqrt2, 256);
  const auto rep_c = variation::lojasiewicz_gradient_check(circle, lopts);

  lopts.seed = opts.seed + 12;
  const auto& al = get_al23(shared);
  const auto rep_a = variation::lojasiewicz_gradient_check(al, lopts);

  const int total = static_cast<int>(rep_c.samples.size() + rep_a.samples.size());
  const double C = std::max(rep_c.C, rep_a.C);

  // A single constant must certify every sample from both ensembles.
  int violations = 0;
  for (const auto* rep : {&rep_c, &rep_a}) {
    for (const auto& s : rep->samples) {
      if (s.f_gap > C * std::pow(s.phi_l2, 1.5) * (1.0 + 1e-12)) ++violations;
    }
  }
  const double min_exp = std::min(rep_c.min_local_exponent, rep_a.min_local_exponent);

  res.rows.push_back(row_flag("sample-count", "ensemble-size", total >= 500));
  res.rows.push_back(row_eq("violations", "gradient-inequality", violations, 0.0, 0.0));
  res.rows.push_back(row_flag("constant-finite", "gradient-inequality",
                              std::isfinite(C) && C > 0.0));
  res.rows.push_back(
      row_flag("min-local-exponent", "gradient-exponent", min_exp >= 1.5));

  shared.loja_C = C;
  shared.have_loja_C = true;

  res.pass = true;
  for (const auto& r : res.rows) res.pass = res.pass && r.pass;
  return res;
}

// ---------------------------------------------------------------- AC-8
CriterionResult criterion_flow(SharedState& shared, const AcceptanceOptions& opts) {
  CriterionResult res;
  res.id = "AC-8";
  res.title = "rescaled flow dynamics";

  // Mode-2 decay at rate -1.
  flow::FlowConfig cfg2;
  cfg2.dt = 1e-3;
  cfg2.steps = 4000;
  cfg2.grid_size = 256;
  cfg2.modes = {2};
  cfg2.amplitudes = {1e-2};
  cfg2.stabilization = flow::Stabilization::project_unstable;
  cfg2.sample_every = 5;
  const auto traj2 = flow::simulate(cfg2);
  const auto fit2 = flow::decay_rate_fit(traj2, 2);
  res.rows.push_back(row_eq("mode2-rate", "decay-rate", fit2.rate, -1.0, 0.05));

  // Mode-3 decay at rate -7/2.
  flow::FlowConfig cfg3 = cfg2;
  cfg3.dt = 5e-4;
  cfg3.steps = 6000;
  cfg3.modes = {3};
  const auto traj3 = flow::simulate(cfg3);
  const auto fit3 = flow::decay_rate_fit(traj3, 3, 2e-2, 1e-8);
  res.rows.push_back(row_eq("mode3-rate", "decay-rate", fit3.rate, -3.5, 0.15));

  // Energy identity at first order in dt (no stabilization, short horizon).
  flow::FlowConfig cfg_e = cfg2;
  cfg_e.stabilization = flow::Stabilization::none;
  cfg_e.steps = 1000;
  cfg_e.sample_every = 10;
  const auto traj_e = flow::simulate(cfg_e);
  flow::FlowConfig cfg_e2 = cfg_e;
  cfg_e2.dt = 5e-4;
  cfg_e2.steps = 2000;
  cfg_e2.sample_every = 20;
  const auto traj_e2 = flow::simulate(cfg_e2);
  const double order = flow::energy_identity_order(traj_e, traj_e2);
  res.rows.push_back(row_eq("energy-identity-order", "area-dissipation", order, 1.0, 0.35));
  res.rows.push_back(row_bound("energy-identity-mismatch", "area-dissipation",
                               flow::energy_identity_check(traj_e).median_rel_mismatch,
                               50.0 * cfg_e.dt));

  // Monotonicity budget.
  res.rows.push_back(row_bound("f-increase-total", "area-monotonicity",
                               traj2.f_increase_total + traj3.f_increase_total, 1e-8));

  // Gradient-inequality comparison bound along the mode-2 trajectory.
  if (!shared.have_loja_C) {
    criterion_lojasiewicz(shared, opts);
  }
  const auto loja = flow::lojasiewicz_rate_bound_check(traj2, shared.loja_C, kCircleArea);
  res.rows.push_back(row_flag("trajectory-inequality", "gradient-inequality",
                              loja.inequality_ok));
  res.rows.push_back(row_flag("trajectory-comparison-bound", "decay-comparison",
                              loja.ode_bound_ok));

  res.pass = true;
  for (const auto& r : res.rows) res.pass = res.pass && r.pass;
  return res;
}

// ---------------------------------------------------------------- AC-9
CriterionResult criterion_gaussian(const AcceptanceOptions& opts) {
  CriterionResult res;
  res.id = "AC-9";
  res.title = "tail and Poincare inequalities";

  // Tail ratio bounded on [1,10] and eventually non-increasing.
  bool bounded = true;
  bool eventually_monotone = true;
  double sup_ratio = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int m = 0; m <= 6; ++m) {
      double prev = 0.0;
      double peak = 0.0;
      int peak_idx = 0;
      std::vector<double> ratios;
      for (int i = 0; i <= 180; ++i) {
        const double R = 1.0 + 0.05 * i;
        const double ratio = gauss::cutoff_tail_ratio(n, m, R);
        if (!std::isfinite(ratio) || ratio <= 0.0) bounded = false;
        ratios.push_back(ratio);
        if (ratio > peak) {
          peak = ratio;
          peak_idx = i;
        }
        prev = ratio;
      }
      (void)prev;
      sup_ratio = std::max(sup_ratio, peak);
      for (size_t i = static_cast<size_t>(peak_idx) + 1; i < ratios.size(); ++i) {
        if (ratios[i] > ratios[i - 1] * (1.0 + 1e-12)) eventually_monotone = false;
      }
    }
  }
  res.rows.push_back(row_flag("tail-ratio-bounded", "truncation-bound", bounded));
  res.rows.push_back(
      row_flag("tail-ratio-monotone", "truncation-bound", eventually_monotone));

  // Poincare anchors on a wide uniform grid.
  const int n_grid = 4001;
  gauss::SampledFunction anchor;
  anchor.axes = {Eigen::ArrayXd::LinSpaced(n_grid, -40.0, 40.0)};
  anchor.values = Eigen::ArrayXd::Ones(n_grid);
  anchor.gradient = {Eigen::ArrayXd::Zero(n_grid)};
  const auto p1 = gauss::gaussian_poincare_check(anchor, 1);
  res.rows.push_back(row_eq("anchor-constant-lhs", "poincare", p1.lhs, 0.5, 1e-9));
  res.rows.push_back(row_eq("anchor-constant-rhs", "poincare", p1.rhs, 1.0, 1e-9));

  anchor.values = anchor.axes[0];
  anchor.gradient = {Eigen::ArrayXd::Ones(n_grid)};
  const auto p2 = gauss::gaussian_poincare_check(anchor, 1);
  res.rows.push_back(row_eq("anchor-linear-lhs", "poincare", p2.lhs, 3.0, 1e-9));
  res.rows.push_back(row_eq("anchor-linear-rhs", "poincare", p2.rhs, 6.0, 1e-9));

  // Random compactly supported polynomial-times-bump ensemble.
  std::mt19937_64 rng(opts.seed + 5);
  auto uniform = [&rng]() {
    return 2.0 * std::ldexp(static_cast<double>(rng()), -64) - 1.0;
  };
  int violations = 0;
  const int m_grid = 2001;
  const double half_width = 6.0;
  const Eigen::ArrayXd y = Eigen::ArrayXd::LinSpaced(m_grid, -half_width, half_width);
  for (int trial = 0; trial < 60; ++trial) {
    double c[5];
    for (double& ci : c) ci = uniform();
    Eigen::ArrayXd poly = Eigen::ArrayXd::Zero(m_grid);
    Eigen::ArrayXd dpoly = Eigen::ArrayXd::Zero(m_grid);
    for (int d = 0; d < 5; ++d) {
      poly += c[d] * y.pow(d);
      if (d >= 1) dpoly += c[d] * d * y.pow(d - 1);
    }
    // smooth bump supported on |y| < half_width
    Eigen::ArrayXd bump = Eigen::ArrayXd::Zero(m_grid);
    Eigen::ArrayXd dbump = Eigen::ArrayXd::Zero(m_grid);
    for (int i = 0; i < m_grid; ++i) {
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
    if (p.lhs > p.rhs * (1.0 + 1e-12)) ++violations;
  }
  res.rows.push_back(row_eq("ensemble-violations", "poincare", violations, 0.0, 0.0));

  res.pass = true;
  for (const auto& r : res.rows) res.pass = res.pass && r.pass;
  return res;
}

CriterionResult dispatch(int index, SharedState& shared, const AcceptanceOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult res;
  switch (index) {
    case 1: res = criterion_moments(opts); break;
    case 2: res = criterion_bruteforce(opts); break;
    case 3: res = criterion_lower_bound(opts); break;
    case 4: res = criterion_curves(shared); break;
    case 5: res = criterion_assumptions(shared); break;
    case 6: res = criterion_variation(shared); break;
    case 7: res = criterion_lojasiewicz(shared, opts); break;
    case 8: res = criterion_flow(shared, opts); break;
    case 9: res = criterion_gaussian(opts); break;
    default: throw std::invalid_argument("criterion index must be 1..9");
  }
  const auto t1 = std::chrono::steady_clock::now();
  res.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
  return res;
}

}  // namespace

CriterionResult run_criterion(int index, const AcceptanceOptions& opts) {
  SharedState shared;
  return dispatch(index, shared, opts);
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  SharedState shared;
  std::vector<CriterionResult> results;
  for (int i = 1; i <= 9; ++i) {
    try {
      results.push_back(dispatch(i, shared, opts));
    } catch (const std::exception& e) {
      CriterionResult res;
      res.id = "AC-" + std::to_string(i);
      res.title = std::string("exception: ") + e.what();
      res.pass = false;
      results.push_back(res);
    }
  }
  return results;
}

nlohmann::ordered_json to_json(const std::vector<CriterionResult>& results,
                               const AcceptanceOptions& opts) {
  nlohmann::ordered_json out;
  out["version"] = kVersion;
  out["seed"] = opts.seed;
  if (!opts.fault_injection.empty()) out["fault_injection"] = opts.fault_injection;
  bool all = true;
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const auto& res : results) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : res.rows) {
      nlohmann::ordered_json jr{{"check_id", r.check_id},
                                {"anchor", r.anchor},
                                {"value", r.value},
                                {"tolerance", r.tolerance},
                                {"status", r.pass ? "pass" : "fail"}};
      if (std::isfinite(r.expected)) jr["expected"] = r.expected;
      rows.push_back(jr);
    }
    items.push_back(nlohmann::ordered_json{{"id", res.id},
                                           {"title", res.title},
                                           {"pass", res.pass},
                                           {"runtime_seconds", res.runtime_seconds},
                                           {"rows", rows}});
    all = all && res.pass;
  }
  out["criteria"] = items;
  out["pass"] = all;
  return out;
}

}  // namespace shrinklab::report
