// Serial reference vs OpenMP kernels on the grid evaluations that dominate a
// sum-rule run.

#include <benchmark/benchmark.h>

#include <vector>

#include "cansys/kernels.hpp"
#include "cansys/profile.hpp"
#include "cansys/quadrature.hpp"
#include "cansys/spectral.hpp"

using namespace cansys;

namespace {

ArovProfile bump() {
  return {Coefficient::constant(1.0), Coefficient::bump(0.8, 0.0, 1.0), Coefficient::constant(0.0), 1.0, 1.0};
}

ArovProfile two_step() {
  return {Coefficient::constant(1.0), Coefficient(StepCoef{{0.0, 0.5, 1.5}, {0.3, 0.5}}),
          Coefficient(StepCoef{{0.0, 1.0, 1.5}, {0.4, -0.2}}), 1.5, 1.0};
}

void transfer_grid(benchmark::State& state, Exec exec) {
  const ArovProfile p = bump();
  const TanRule rule = tan_rule(static_cast<std::size_t>(state.range(0)));
  const std::vector<cplx> z(rule.x.begin(), rule.x.end());
  TransferOptions o;
  o.estimate_error = false;
  for (auto _ : state) benchmark::DoNotOptimize(transfer_nodes(p, z, 1.0, o, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void schur_grid_bench(benchmark::State& state, Exec exec, ArovProfile (*make)()) {
  const ArovProfile p = make();
  SchurOptions o;
  o.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(schur_grid(p, static_cast<std::size_t>(state.range(0)), o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(transfer_grid, serial, Exec::serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(transfer_grid, parallel, Exec::parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(schur_grid_bench, bump_serial, Exec::serial, bump)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(schur_grid_bench, bump_parallel, Exec::parallel, bump)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(schur_grid_bench, two_step_serial, Exec::serial, two_step)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(schur_grid_bench, two_step_parallel, Exec::parallel, two_step)
    ->Arg(2048)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
