#include "shrinklab/alcurve.hpp"
#include "shrinklab/flow.hpp"
#include "shrinklab/obstruction.hpp"
#include "shrinklab/spectral.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_bruteforce_projection_dim4(benchmark::State& state) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(4, 4);
  const shrinklab::obstruction::QuadCoeffs coeffs(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        shrinklab::obstruction::quadratic_projection_bruteforce(coeffs, 1));
  }
}
BENCHMARK(BM_bruteforce_projection_dim4);

void BM_curve_shooting_23(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        shrinklab::alcurve::find_closed_curve(2, 3, {0.72, 3.0}, 256));
  }
}
BENCHMARK(BM_curve_shooting_23)->Unit(benchmark::kMillisecond);

void BM_eigensolve_jacobi(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto circle = shrinklab::alcurve::make_circle(shrinklab::alcurve::kSqrt2, n);
  const auto op =
      shrinklab::spectral::build_operator(circle, shrinklab::spectral::OperatorKind::jacobi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shrinklab::spectral::eigensolve(op, 8));
  }
}
BENCHMARK(BM_eigensolve_jacobi)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_flow_step(benchmark::State& state) {
  shrinklab::flow::FlowConfig cfg;
  cfg.grid_size = 256;
  cfg.modes = {2};
  cfg.amplitudes = {1e-2};
  auto st = shrinklab::flow::make_initial(cfg);
  for (auto _ : state) {
    st = shrinklab::flow::rmcf_step(st, cfg);
    benchmark::DoNotOptimize(st.F);
  }
}
BENCHMARK(BM_flow_step)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
