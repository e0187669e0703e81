#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>

#include "eitlab/grid.hpp"
#include "eitlab/mbsolver.hpp"
#include "eitlab/medium.hpp"
#include "eitlab/schedule.hpp"

namespace {

using namespace eitlab;

// Fixed 200 RK4 steps of a dark polariton under constant control.
void BM_LinearMbSteps(benchmark::State& state) {
  const auto nz = static_cast<std::size_t>(state.range(0));
  const MediumParams medium(10.0, 1.0, 100.0);
  const auto sch = ControlSchedule::constant_cot(1.0);
  const double dz = 256.0 / static_cast<double>(nz);
  const double dt = std::min(0.5 * dz, mb::stable_step(medium, sch, dz, 0.0, 1.0));
  const Grid grid(-64.0, 192.0, nz, dt, 200.0 * dt);
  ComplexVector psi(static_cast<Eigen::Index>(nz));
  for (std::size_t i = 0; i < nz; ++i) {
    const double z = grid.z(i) / 10.0;
    psi[static_cast<Eigen::Index>(i)] = std::exp(-z * z);
  }
  const FieldState init = mb::prepare_dark_polariton(psi, medium, sch, grid);
  for (auto _ : state) {
    auto traj = mb::solve_linear_mb(init, medium, sch, grid);
    benchmark::DoNotOptimize(traj.snapshots.back().E.data());
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_LinearMbSteps)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace
