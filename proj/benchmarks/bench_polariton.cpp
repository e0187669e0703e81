#include <benchmark/benchmark.h>

#include <cmath>

#include "eitlab/grid.hpp"
#include "eitlab/medium.hpp"
#include "eitlab/polariton.hpp"
#include "eitlab/schedule.hpp"

namespace {

using namespace eitlab;

void BM_NonadiabaticIntegrals(benchmark::State& state) {
  const MediumParams medium(10.0, 1.0, 100.0);
  const auto sch = presets::stop_and_release_fig3();
  for (auto _ : state) {
    auto in = nonadiabatic_integrals(sch, medium, 0.0, 150.0);
    benchmark::DoNotOptimize(&in);
  }
}
BENCHMARK(BM_NonadiabaticIntegrals)->Unit(benchmark::kMicrosecond);

void BM_NonadiabaticPropagate(benchmark::State& state) {
  const auto nz = static_cast<std::size_t>(state.range(0));
  const MediumParams medium(10.0, 1.0, 100.0);
  const auto sch = ControlSchedule::tanh_ramp({1.0, 0.5, 0.05, 80.0, 160.0});
  const Grid grid(-64.0, 192.0, nz, 0.01, 250.0);
  ComplexVector psi(static_cast<Eigen::Index>(nz));
  for (std::size_t i = 0; i < nz; ++i) {
    const double z = grid.z(i) / 10.0;
    psi[static_cast<Eigen::Index>(i)] = std::exp(-z * z);
  }
  for (auto _ : state) {
    auto out = nonadiabatic_propagate(psi, sch, medium, grid, 100.0);
    benchmark::DoNotOptimize(out.psi.data());
  }
}
BENCHMARK(BM_NonadiabaticPropagate)->Arg(256)->Arg(4096)->Unit(benchmark::kMicrosecond);

}  // namespace
