#include <benchmark/benchmark.h>

#include "eitlab/schedule.hpp"
#include "eitlab/singlemode.hpp"

namespace {

using namespace eitlab;

void BM_StorageTransfer(benchmark::State& state) {
  const int atoms = static_cast<int>(state.range(0));
  const singlemode::SymmetricBasis basis(atoms, 2);
  const auto rho = singlemode::fock_state(1, 2);
  const auto ramp = ControlSchedule::storage_ramp(100.0);
  for (auto _ : state) {
    auto r = singlemode::adiabatic_transfer(rho, ramp, basis, 1.0, 100.0);
    benchmark::DoNotOptimize(r.fidelity);
  }
}
BENCHMARK(BM_StorageTransfer)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_BruteForceOracle(benchmark::State& state) {
  for (auto _ : state) {
    auto o = singlemode::brute_force_oracle(static_cast<int>(state.range(0)), 2, 1.0, 0.7);
    benchmark::DoNotOptimize(o.hamiltonian.data());
  }
}
BENCHMARK(BM_BruteForceOracle)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
