// Command line driver: every experiment is a subcommand with a reproducible
// configuration, machine-readable JSON/CSV output, and exit codes
//   0 = all asserted checks passed, 1 = a check failed, 2 = usage error.

#include "shrinklab/alcurve.hpp"
#include "shrinklab/flow.hpp"
#include "shrinklab/gauss.hpp"
#include "shrinklab/obstruction.hpp"
#include "shrinklab/report.hpp"
#include "shrinklab/spectral.hpp"
#include "shrinklab/variation.hpp"
#include "shrinklab/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

namespace {

using nlohmann::ordered_json;

std::string output_dir() {
  if (const char* env = std::getenv("SHRINKLAB_OUT")) return env;
  return ".";
}

void emit(const ordered_json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << std::endl;
  } else {
    const auto full = std::filesystem::path(output_dir()) / out_path;
    std::ofstream f(full);
    if (!f) throw std::runtime_error("cannot open " + full.string());
    f << doc.dump(2) << std::endl;
    std::cout << "wrote " << full.string() << std::endl;
  }
}

ordered_json base_header(const std::string& subcommand, const ordered_json& params) {
  return ordered_json{{"subcommand", subcommand}, {"version", shrinklab::kVersion},
                      {"config", params}};
}

shrinklab::alcurve::ClosedCurve load_base(int p, int q, int grid,
                                          const std::string& input_csv) {
  using namespace shrinklab;
  if (!input_csv.empty()) return alcurve::read_curve_csv(input_csv);
  if (p == 1 && q == 1) return alcurve::make_circle(alcurve::kSqrt2, grid);
  const auto profile = alcurve::find_closed_curve(p, q, {0.72, 3.0}, grid);
  return alcurve::reconstruct_curve(profile);
}

int cmd_moments(int max_degree, const std::string& out) {
  using namespace shrinklab;
  ordered_json doc = base_header("moments", {{"max_degree", max_degree}});
  ordered_json rows = ordered_json::array();
  bool ok = true;
  double worst = 0.0;
  for (int dim = 1; dim <= 3; ++dim) {
    const auto rule = gauss::gauss_hermite_rule(dim, (max_degree + 2) / 2);
    std::vector<int> alpha(static_cast<size_t>(dim), 0);
    std::function<void(int, int)> visit = [&](int pos, int remaining) {
      if (pos == dim) {
        const gauss::MultiIndex mi(alpha);
        const double exact = gauss::gaussian_moment(mi);
        const double quad = gauss::moment_by_quadrature(mi, rule);
        const double diff = std::fabs(exact - quad);
        worst = std::max(worst, diff);
        ok = ok && diff <= 1e-10;
        rows.push_back(ordered_json{{"alpha", alpha}, {"moment", exact},
                                    {"quadrature", quad}, {"diff", diff}});
        return;
      }
      for (int e = 0; e <= remaining; e += 2) {
        alpha[static_cast<size_t>(pos)] = e;
        visit(pos + 1, remaining - e);
      }
    };
    visit(0, max_degree);
  }
  doc["rows"] = rows;
  doc["worst_diff"] = worst;
  doc["pass"] = ok;
  emit(doc, out);
  return ok ? 0 : 1;
}

int cmd_al_solve(int p, int q, int grid, double lo, double hi,
                 const std::string& curve_out, const std::string& out) {
  using namespace shrinklab;
  const auto profile = alcurve::find_closed_curve(p, q, {lo, hi}, grid);
  const auto curve = alcurve::reconstruct_curve(profile);
  const auto routes = alcurve::compute_B1(curve);

  if (!curve_out.empty()) {
    const auto full = std::filesystem::path(output_dir()) / curve_out;
    alcurve::write_curve_csv(curve, full.string());
    std::cout << "wrote " << full.string() << std::endl;
  }

  ordered_json doc = base_header(
      "al-solve", {{"p", p}, {"q", q}, {"grid", grid}, {"bracket", {lo, hi}}});
  doc["kappa_max"] = profile.kappa_max;
  doc["length"] = curve.length;
  doc["rotation_index"] = curve.rotation_index;
  doc["first_integral_drift"] = profile.first_integral_drift;
  doc["closure_defect"] = curve.closure_defect;
  doc["shrinker_residual"] = curve.shrinker_residual;
  doc["rho_kappa_rel_var"] = curve.weight_constant_rel_var;
  doc["weight_constant"] = curve.weight_constant;
  doc["B1"] = {{"route_a", routes.route_a},
               {"route_b", routes.route_b},
               {"route_c", routes.route_c}};
  doc["gaussian_area"] = alcurve::gaussian_area(curve);
  const bool ok = curve.closure_defect <= 1e-8 && curve.shrinker_residual <= 1e-7 &&
                  curve.weight_constant_rel_var <= 1e-8;
  doc["pass"] = ok;
  emit(doc, out);
  return ok ? 0 : 1;
}

int cmd_curve_check(const std::string& input_csv, const std::string& out) {
  using namespace shrinklab;
  const auto curve = alcurve::read_curve_csv(input_csv);
  const auto routes = alcurve::compute_B1(curve);
  ordered_json doc = base_header("curve-check", {{"input", input_csv}});
  doc["length"] = curve.length;
  doc["rotation_index"] = curve.rotation_index;
  doc["shrinker_residual"] = curve.shrinker_residual;
  doc["rho_kappa_rel_var"] = curve.weight_constant_rel_var;
  doc["ode_residual"] = alcurve::ode_residual(curve);
  doc["B1"] = {{"route_a", routes.route_a},
               {"route_b", routes.route_b},
               {"route_c", routes.route_c}};
  doc["gaussian_area"] = alcurve::gaussian_area(curve);
  ordered_json idents = ordered_json::array();
  for (int n = 2; n <= 4; ++n) {
    const auto [first, second] = alcurve::integration_identity_check(curve, n);
    idents.push_back(ordered_json{{"n", n},
                                  {"first", {first.lhs, first.rhs}},
                                  {"second", {second.lhs, second.rhs}}});
  }
  doc["integration_identities"] = idents;
  const bool ok = curve.shrinker_residual <= 1e-6;
  doc["pass"] = ok;
  emit(doc, out);
  return ok ? 0 : 1;
}

int cmd_spectrum(int p, int q, int grid, const std::string& kind_name, int count,
                 const std::string& input_csv, const std::string& eigenfunctions_csv,
                 const std::string& out) {
  using namespace shrinklab;
  const auto curve = load_base(p, q, grid, input_csv);
  const auto kind = kind_name == "drift" ? spectral::OperatorKind::drift_laplacian
                                         : spectral::OperatorKind::jacobi;
  const auto op = spectral::build_operator(curve, kind);
  const auto pairs = spectral::eigensolve(op, count);

  ordered_json doc = base_header("spectrum", {{"p", p},
                                              {"q", q},
                                              {"grid", grid},
                                              {"kind", kind_name},
                                              {"count", count},
                                              {"input", input_csv}});
  doc["weighted_symmetry_defect"] = op.weighted_symmetry_defect();
  ordered_json evs = ordered_json::array();
  for (const auto& pr : pairs) {
    evs.push_back(ordered_json{{"eigenvalue", pr.eigenvalue}, {"residual", pr.residual}});
  }
  doc["eigenpairs"] = evs;
  ordered_json cl = ordered_json::array();
  for (const auto& c : spectral::cluster_eigenvalues(pairs)) {
    cl.push_back(ordered_json{{"value", c.value}, {"multiplicity", c.multiplicity}});
  }
  doc["clusters"] = cl;
  doc["pass"] = true;

  if (!eigenfunctions_csv.empty()) {
    const auto full = std::filesystem::path(output_dir()) / eigenfunctions_csv;
    std::ofstream f(full);
    f << "sigma";
    for (size_t i = 0; i < pairs.size(); ++i) f << ",psi" << i;
    f << "\n";
    f.precision(17);
    for (Eigen::Index row = 0; row < curve.size(); ++row) {
      f << curve.sigma[row];
      for (const auto& pr : pairs) f << ',' << pr.eigenfunction[row];
      f << "\n";
    }
    std::cout << "wrote " << full.string() << std::endl;
  }
  emit(doc, out);
  return 0;
}

int cmd_verify_assumptions(int p, int q, int grid, const std::string& input_csv,
                           const std::string& out) {
  using namespace shrinklab;
  const auto curve = load_base(p, q, grid, input_csv);
  const auto rep = spectral::verify_assumptions(curve);

  ordered_json doc = base_header("verify-assumptions",
                                 {{"p", p}, {"q", q}, {"grid", grid}, {"input", input_csv}});
  doc["a1"] = {{"pass", rep.a1.pass},
               {"residual_x1", rep.a1.residual_x1},
               {"residual_x2", rep.a1.residual_x2},
               {"half_cluster_dim", rep.a1.half_cluster_dim},
               {"subspace_angle", rep.a1.subspace_angle},
               {"spectrum_head", rep.a1.spectrum_head}};
  doc["a2"] = {{"pass", rep.a2.pass},
               {"res_dilation", rep.a2.res_dilation},
               {"res_translation_x1", rep.a2.res_translation_x1},
               {"res_translation_x2", rep.a2.res_translation_x2},
               {"res_rotation", rep.a2.res_rotation},
               {"rotation_applicable", rep.a2.rotation_applicable},
               {"mult_one", rep.a2.mult_one},
               {"mult_half", rep.a2.mult_half},
               {"mult_zero", rep.a2.mult_zero},
               {"nearest_to_zero", rep.a2.nearest_to_zero},
               {"max_multiplicity", rep.a2.max_multiplicity},
               {"spectrum_head", rep.a2.spectrum_head}};
  const bool ok = rep.a1.pass && rep.a2.pass;
  doc["pass"] = ok;
  emit(doc, out);
  return ok ? 0 : 1;
}

int cmd_obstruction(const std::vector<int>& dims, int samples, std::uint64_t seed,
                    const std::string& out) {
  using namespace shrinklab;
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return 2.0 * std::ldexp(static_cast<double>(rng()), -64) - 1.0;
  };

  ordered_json doc = base_header(
      "obstruction", {{"dims", dims}, {"samples", samples}, {"seed", seed}});
  ordered_json per_dim = ordered_json::array();
  bool ok = true;
  for (int dim : dims) {
    const auto inv = obstruction::sphere_cross_section(1, dim);
    double worst_identity = 0.0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int t = 0; t < samples; ++t) {
      Eigen::MatrixXd a(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
          a(i, j) = uniform();
          a(j, i) = a(i, j);
        }
      }
      const obstruction::QuadCoeffs coeffs(a);
      if (coeffs.sum_squares() == 0.0) continue;
      for (int b = 0; b < dim; ++b) {
        const double brute = obstruction::quadratic_projection_bruteforce(coeffs, b);
        worst_identity = std::max(
            worst_identity, std::fabs(brute - 64.0 * coeffs.row_sum_squares(b)));
      }
      const auto lb = obstruction::obstruction_lower_bound(coeffs, inv);
      if (lb.lhs < lb.rhs * (1.0 - 1e-12)) ++violations;
      worst_ratio = std::min(worst_ratio, lb.lhs / lb.rhs);
    }
    ok = ok && worst_identity <= 1e-10 && violations == 0;
    per_dim.push_back(ordered_json{{"dim", dim},
                                   {"worst_identity_error", worst_identity},
                                   {"lower_bound_violations", violations},
                                   {"min_lhs_over_rhs", worst_ratio}});
  }
  doc["per_dim"] = per_dim;
  doc["pass"] = ok;
  emit(doc, out);
  return ok ? 0 : 1;
}

int cmd_variation_check(int p, int q, int grid, const std::string& direction,
                        const std::vector<double>& eps_list, std::uint64_t seed,
                        const std::string& out) {
  using namespace shrinklab;
  const auto base = load_base(p, q, grid, "");

  Eigen::ArrayXd values;
  if (direction == "kappa") {
    values = base.kappa;
  } else if (direction.rfind("mode:", 0) == 0) {
    const int j = std::stoi(direction.substr(5));
    values = (static_cast<double>(j) * base.sigma * (2.0 * 3.14159265358979323846 / base.length)).cos();
  } else if (direction == "random") {
    values = variation::random_direction(base, 8, seed);
  } else {
    throw CLI::ValidationError("--direction must be kappa, mode:<j>, or random");
  }
  const auto v = variation::NormalField::from_values(base, values);

  const auto fv = variation::first_variation_check(base, v, eps_list);
  const auto sv = variation::second_variation_check(base, v, eps_list);
  const auto taylor = variation::taylor_remainder_check(base, v, eps_list);
  const auto fexp = variation::F_expansion_check(base, v, eps_list);

  ordered_json doc = base_header("variation-check", {{"p", p},
                                                     {"q", q},
                                                     {"grid", grid},
                                                     {"direction", direction},
                                                     {"eps", eps_list},
                                                     {"seed", seed}});
  doc["first_variation"] = {{"eps", fv.eps},
                            {"residual", fv.residual},
                            {"slope", fv.slope},
                            {"limit_error", fv.limit_error}};
  doc["second_variation"] = {{"normal_error", sv.normal_error},
                             {"budget", sv.budget},
                             {"slope", sv.slope},
                             {"tangent_error", sv.tangent_error},
                             {"pass", sv.pass}};
  doc["taylor"] = {{"slope1", taylor.slope1},
                   {"slope2", taylor.slope2},
                   {"resolved", taylor.resolved}};
  doc["f_expansion"] = {{"eps", fexp.eps},
                        {"gap", fexp.gap},
                        {"bound", fexp.bound},
                        {"fitted_c", fexp.fitted_c},
                        {"c_spread", fexp.c_spread}};
  const bool ok = (fv.all_zero || (fv.slope > 0.9 && fv.slope < 1.1)) && sv.pass;
  doc["pass"] = ok;
  emit(doc, out);
  return ok ? 0 : 1;
}

int cmd_lojasiewicz(int p, int q, int grid, int directions, int eps_per_direction,
                    double amp_lo, double amp_hi, std::uint64_t seed,
                    const std::string& scatter_csv, const std::string& out) {
  using namespace shrinklab;
  const auto base = load_base(p, q, grid, "");
  variation::LojaOptions lopts;
  lopts.directions = directions;
  lopts.eps_per_direction = eps_per_direction;
  lopts.amp_lo = amp_lo;
  lopts.amp_hi = amp_hi;
  lopts.seed = seed;
  const auto rep = variation::lojasiewicz_gradient_check(base, lopts);

  if (!scatter_csv.empty()) {
    const auto full = std::filesystem::path(output_dir()) / scatter_csv;
    std::ofstream f(full);
    f << "phi_l2,f_gap,direction,epsilon\n";
    f.precision(17);
    for (const auto& s : rep.samples) {
      f << s.phi_l2 << ',' << s.f_gap << ',' << s.direction << ',' << s.eps << "\n";
    }
    std::cout << "wrote " << full.string() << std::endl;
  }

  ordered_json doc = base_header("lojasiewicz", {{"p", p},
                                                 {"q", q},
                                                 {"grid", grid},
                                                 {"directions", directions},
                                                 {"eps_per_direction", eps_per_direction},
                                                 {"amp", {amp_lo, amp_hi}},
                                                 {"seed", seed}});
  doc["samples"] = rep.samples.size();
  doc["excluded"] = rep.excluded;
  doc["C"] = rep.C;
  doc["min_local_exponent"] = rep.min_local_exponent;
  const bool ok = std::isfinite(rep.C) && rep.min_local_exponent >= 1.5;
  doc["pass"] = ok;
  emit(doc, out);
  return ok ? 0 : 1;
}

int cmd_flow(const std::vector<int>& modes, const std::vector<double>& amps, double dt,
             int steps, int grid, const std::string& stab_name, int sample_every,
             const std::string& trajectory_csv, const std::string& checkpoint_csv,
             const std::string& restart_csv, const std::string& out) {
  using namespace shrinklab;
  flow::FlowConfig cfg;
  cfg.dt = dt;
  cfg.steps = steps;
  cfg.grid_size = grid;
  cfg.modes = modes;
  cfg.amplitudes = amps;
  cfg.sample_every = sample_every;
  if (stab_name == "none") {
    cfg.stabilization = flow::Stabilization::none;
  } else if (stab_name == "recenter") {
    cfg.stabilization = flow::Stabilization::recenter;
  } else if (stab_name == "project_unstable") {
    cfg.stabilization = flow::Stabilization::project_unstable;
  } else {
    throw CLI::ValidationError("--stabilization must be none, recenter, project_unstable");
  }

  flow::Trajectory traj;
  if (!restart_csv.empty()) {
    const auto curve = alcurve::read_curve_csv(restart_csv);
    flow::FlowState st = flow::curve_to_state(curve, 0.0, cfg.tracked_modes);
    traj.config = cfg;
    traj.states.push_back(st);
    double prev_f = st.F;
    for (int step = 1; step <= cfg.steps; ++step) {
      st = flow::rmcf_step(st, cfg);
      if (st.F > prev_f) traj.f_increase_total += st.F - prev_f;
      prev_f = st.F;
      if (step % cfg.sample_every == 0 || step == cfg.steps) traj.states.push_back(st);
    }
  } else {
    traj = flow::simulate(cfg);
  }

  if (!trajectory_csv.empty()) {
    const auto full = std::filesystem::path(output_dir()) / trajectory_csv;
    flow::write_trajectory_csv(traj, full.string());
    std::cout << "wrote " << full.string() << std::endl;
  }
  if (!checkpoint_csv.empty()) {
    const auto full = std::filesystem::path(output_dir()) / checkpoint_csv;
    alcurve::write_curve_csv(flow::state_to_curve(traj.back()), full.string());
    std::cout << "wrote " << full.string() << std::endl;
  }

  ordered_json doc = base_header("flow", {{"modes", modes},
                                          {"amplitudes", amps},
                                          {"dt", dt},
                                          {"steps", steps},
                                          {"grid", grid},
                                          {"stabilization", stab_name},
                                          {"sample_every", sample_every},
                                          {"restart", restart_csv}});
  doc["final"] = {{"s", traj.back().s},
                  {"F", traj.back().F},
                  {"phi_l2", traj.back().phi_l2},
                  {"shrinker_scale", traj.back().shrinker_scale}};
  doc["f_increase_total"] = traj.f_increase_total;

  ordered_json fits = ordered_json::array();
  for (int mode : modes) {
    try {
      const auto fit = flow::decay_rate_fit(traj, mode);
      fits.push_back(ordered_json{{"mode", mode},
                                  {"rate", fit.rate},
                                  {"predicted", 1.0 - 0.5 * mode * mode},
                                  {"points", fit.points}});
    } catch (const std::exception& e) {
      fits.push_back(ordered_json{{"mode", mode}, {"error", e.what()}});
    }
  }
  doc["decay_fits"] = fits;
  doc["pass"] = true;
  emit(doc, out);
  return 0;
}

int cmd_report_suite(std::uint64_t seed, const std::string& fault,
                     const std::string& out) {
  using namespace shrinklab;
  report::AcceptanceOptions opts;
  opts.seed = seed;
  opts.fault_injection = fault;
  const auto results = report::run_acceptance(opts);
  bool all = true;
  for (const auto& r : results) {
    std::cout << r.id << (r.pass ? " PASS " : " FAIL ") << "(" << r.title << ", "
              << r.runtime_seconds << " s)" << std::endl;
    if (!r.pass) {
      for (const auto& row : r.rows) {
        if (!row.pass) {
          std::cout << "    " << row.check_id << " value=" << row.value
                    << " expected=" << row.expected << " tol=" << row.tolerance
                    << std::endl;
        }
      }
    }
    all = all && r.pass;
  }
  emit(report::to_json(results, opts), out);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for closed shrinker curves, their spectra, "
               "and rescaled curve shortening flow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", shrinklab::kVersion);

  // moments
  int max_degree = 6;
  std::string out;
  auto* moments = app.add_subcommand("moments", "weighted moment table and quadrature oracle");
  moments->add_option("--max-degree", max_degree, "largest total degree")->check(CLI::Range(0, 8));
  moments->add_option("--out", out, "JSON output file (default stdout)");

  // al-solve
  int p = 2, q = 3, grid = 512;
  double bracket_lo = 0.72, bracket_hi = 3.0;
  std::string curve_out;
  auto* al = app.add_subcommand("al-solve", "shooting solve for a closed curve");
  al->add_option("--p", p, "rotation index")->required();
  al->add_option("--q", q, "curvature oscillations")->required();
  al->add_option("--grid", grid, "sample count");
  al->add_option("--bracket-lo", bracket_lo, "kappa_max bracket lower end");
  al->add_option("--bracket-hi", bracket_hi, "kappa_max bracket upper end");
  al->add_option("--curve-out", curve_out, "curve CSV output file");
  al->add_option("--out", out, "JSON output file (default stdout)");

  // curve-check
  std::string input_csv;
  auto* check = app.add_subcommand("curve-check", "invariants of a stored curve CSV");
  check->add_option("--in", input_csv, "curve CSV")->required();
  check->add_option("--out", out, "JSON output file (default stdout)");

  // spectrum
  std::string kind = "jacobi", eigencsv;
  int count = 8;
  auto* spec = app.add_subcommand("spectrum", "discrete operator spectrum");
  spec->add_option("--p", p, "rotation index (1 1 = circle)");
  spec->add_option("--q", q, "curvature oscillations");
  spec->add_option("--grid", grid, "sample count");
  spec->add_option("--kind", kind, "drift or jacobi")->check(CLI::IsMember({"drift", "jacobi"}));
  spec->add_option("--count", count, "eigenpairs to report");
  spec->add_option("--in", input_csv, "curve CSV instead of p/q");
  spec->add_option("--eigenfunctions", eigencsv, "CSV output for eigenfunctions");
  spec->add_option("--out", out, "JSON output file (default stdout)");

  // verify-assumptions
  auto* verify = app.add_subcommand("verify-assumptions", "spectral conditions");
  verify->add_option("--p", p, "rotation index (1 1 = circle)");
  verify->add_option("--q", q, "curvature oscillations");
  verify->add_option("--grid", grid, "sample count");
  verify->add_option("--in", input_csv, "curve CSV instead of p/q");
  verify->add_option("--out", out, "JSON output file (default stdout)");

  // obstruction
  std::vector<int> dims{1, 2, 3, 4};
  int samples = 1000;
  std::uint64_t seed = 1;
  auto* obst = app.add_subcommand("obstruction", "projection identities and lower bound");
  obst->add_option("--dims", dims, "dimensions to test");
  obst->add_option("--samples", samples, "random matrices per dimension");
  obst->add_option("--seed", seed, "RNG seed");
  obst->add_option("--out", out, "JSON output file (default stdout)");

  // variation-check
  std::string direction = "mode:2";
  std::vector<double> eps_list{1e-2, 5e-3, 2.5e-3};
  auto* var = app.add_subcommand("variation-check", "finite-difference variation checks");
  var->add_option("--p", p, "rotation index (1 1 = circle)");
  var->add_option("--q", q, "curvature oscillations");
  var->add_option("--grid", grid, "sample count");
  var->add_option("--direction", direction, "kappa, mode:<j>, or random");
  var->add_option("--eps", eps_list, "step sizes");
  var->add_option("--seed", seed, "RNG seed for random direction");
  var->add_option("--out", out, "JSON output file (default stdout)");

  // lojasiewicz
  int directions = 75, eps_per_direction = 7;
  double amp_lo = 1e-4, amp_hi = 1e-2;
  std::string scatter_csv;
  auto* loja = app.add_subcommand("lojasiewicz", "gradient inequality ensemble");
  loja->add_option("--p", p, "rotation index (1 1 = circle)");
  loja->add_option("--q", q, "curvature oscillations");
  loja->add_option("--grid", grid, "sample count");
  loja->add_option("--directions", directions, "random directions");
  loja->add_option("--eps-per-direction", eps_per_direction, "amplitudes per direction");
  loja->add_option("--amp-lo", amp_lo, "smallest amplitude");
  loja->add_option("--amp-hi", amp_hi, "largest amplitude");
  loja->add_option("--seed", seed, "RNG seed");
  loja->add_option("--scatter", scatter_csv, "scatter CSV output");
  loja->add_option("--out", out, "JSON output file (default stdout)");

  // flow
  std::vector<int> modes{2};
  std::vector<double> amps{1e-2};
  double dt = 1e-3;
  int steps = 4000, flow_grid = 256, sample_every = 10;
  std::string stab = "project_unstable", trajectory_csv, checkpoint_csv, restart_csv;
  auto* fl = app.add_subcommand("flow", "rescaled curve shortening flow");
  fl->add_option("--modes", modes, "perturbation modes");
  fl->add_option("--amp", amps, "perturbation amplitudes");
  fl->add_option("--dt", dt, "time step");
  fl->add_option("--steps", steps, "step count");
  fl->add_option("--grid", flow_grid, "angular samples");
  fl->add_option("--stabilization", stab, "none, recenter, project_unstable");
  fl->add_option("--sample-every", sample_every, "record every k-th step");
  fl->add_option("--trajectory", trajectory_csv, "trajectory CSV output");
  fl->add_option("--checkpoint", checkpoint_csv, "final curve CSV output");
  fl->add_option("--restart", restart_csv, "start from a curve CSV");
  fl->add_option("--out", out, "JSON output file (default stdout)");

  // report-suite
  std::string fault;
  auto* suite = app.add_subcommand("report-suite", "run the full verification battery");
  suite->add_option("--seed", seed, "RNG seed");
  suite->add_option("--inject-fault", fault, "test hook: corrupt a named check");
  suite->add_option("--out", out, "JSON output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (moments->parsed()) return cmd_moments(max_degree, out);
    if (al->parsed()) {
      return cmd_al_solve(p, q, grid, bracket_lo, bracket_hi, curve_out, out);
    }
    if (check->parsed()) return cmd_curve_check(input_csv, out);
    if (spec->parsed()) {
      return cmd_spectrum(p, q, grid, kind, count, input_csv, eigencsv, out);
    }
    if (verify->parsed()) return cmd_verify_assumptions(p, q, grid, input_csv, out);
    if (obst->parsed()) return cmd_obstruction(dims, samples, seed, out);
    if (var->parsed()) {
      return cmd_variation_check(p, q, grid, direction, eps_list, seed, out);
    }
    if (loja->parsed()) {
      return cmd_lojasiewicz(p, q, grid, directions, eps_per_direction, amp_lo, amp_hi,
                             seed, scatter_csv, out);
    }
    if (fl->parsed()) {
      return cmd_flow(modes, amps, dt, steps, flow_grid, stab, sample_every,
                      trajectory_csv, checkpoint_csv, restart_csv, out);
    }
    if (suite->parsed()) return cmd_report_suite(seed, fault, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
