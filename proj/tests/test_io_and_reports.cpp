#include "shrinklab/alcurve.hpp"
#include "shrinklab/flow.hpp"
#include "shrinklab/report.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace shrinklab;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("curve CSV round trip") {
  const auto curve =
      alcurve::reconstruct_curve(alcurve::find_closed_curve(2, 3, {0.72, 3.0}, 256));
  const std::string path = temp_path("shrinklab_curve_roundtrip.csv");
  alcurve::write_curve_csv(curve, path);
  const auto back = alcurve::read_curve_csv(path);

  CHECK(back.size() == curve.size());
  CHECK((back.position - curve.position).abs().maxCoeff() < 1e-15);
  CHECK((back.kappa - curve.kappa).abs().maxCoeff() < 1e-15);
  CHECK((back.rho - curve.rho).abs().maxCoeff() < 1e-15);
  CHECK(back.p == 2);
  CHECK(back.q == 3);
  CHECK(back.rotation_index == 2);
  CHECK(back.kappa_max == doctest::Approx(curve.kappa_max).epsilon(1e-14));
  CHECK(back.shrinker_residual < 1e-6);
  std::remove(path.c_str());
}

TEST_CASE("curve CSV rejects malformed input") {
  const std::string path = temp_path("shrinklab_bad_curve.csv");
  {
    std::ofstream f(path);
    f << "sigma,x1,x2\n0,1,2\n";
  }
  CHECK_THROWS(alcurve::read_curve_csv(path));
  std::remove(path.c_str());
  CHECK_THROWS(alcurve::read_curve_csv(temp_path("no_such_file_here.csv")));
}

TEST_CASE("trajectory CSV has the declared columns") {
  flow::FlowConfig cfg;
  cfg.steps = 50;
  cfg.modes = {2};
  cfg.amplitudes = {1e-2};
  cfg.grid_size = 64;
  const auto traj = flow::simulate(cfg);
  const std::string path = temp_path("shrinklab_traj.csv");
  flow::write_trajectory_csv(traj, path);

  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line.rfind("# {", 0) == 0);
  std::getline(f, line);
  CHECK(line.rfind("s,F,phi_l2,shrinker_scale,amp0", 0) == 0);
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  CHECK(rows == static_cast<int>(traj.states.size()));
  std::remove(path.c_str());
}

TEST_CASE("flow checkpoint round trip through the curve format") {
  flow::FlowConfig cfg;
  cfg.steps = 100;
  cfg.modes = {2};
  cfg.amplitudes = {1e-2};
  cfg.grid_size = 128;
  const auto traj = flow::simulate(cfg);
  const std::string path = temp_path("shrinklab_checkpoint.csv");
  alcurve::write_curve_csv(flow::state_to_curve(traj.back()), path);
  const auto curve = alcurve::read_curve_csv(path);
  const auto st = flow::curve_to_state(curve, traj.back().s, 8);
  CHECK(st.F == doctest::Approx(traj.back().F).epsilon(1e-8));
  std::remove(path.c_str());
}

TEST_CASE("fast criteria are deterministic") {
  report::AcceptanceOptions opts;
  opts.seed = 7;
  std::vector<report::CriterionResult> a, b;
  for (int i : {1, 2, 3, 9}) {
    a.push_back(report::run_criterion(i, opts));
    b.push_back(report::run_criterion(i, opts));
  }
  // strip runtimes, compare the rest byte for byte
  for (auto* v : {&a, &b}) {
    for (auto& r : *v) r.runtime_seconds = 0.0;
  }
  CHECK(report::to_json(a, opts).dump() == report::to_json(b, opts).dump());
}

TEST_CASE("fault injection makes the moment criterion fail") {
  report::AcceptanceOptions opts;
  const auto clean = report::run_criterion(1, opts);
  CHECK(clean.pass);

  opts.fault_injection = "moment-table";
  const auto broken = report::run_criterion(1, opts);
  CHECK_FALSE(broken.pass);
  int failing = 0;
  for (const auto& row : broken.rows) {
    if (!row.pass) ++failing;
  }
  CHECK(failing == 1);
}

TEST_CASE("report JSON carries version and per-criterion rows") {
  report::AcceptanceOptions opts;
  const std::vector<report::CriterionResult> results = {report::run_criterion(1, opts)};
  const auto doc = report::to_json(results, opts);
  CHECK(doc.contains("version"));
  CHECK(doc["criteria"].size() == 1);
  CHECK(doc["criteria"][0]["id"] == "AC-1");
  CHECK(doc["criteria"][0]["rows"].size() >= 8);
  CHECK(doc["pass"] == true);
}
