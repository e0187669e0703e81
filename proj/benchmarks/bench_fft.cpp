#include <benchmark/benchmark.h>

#include <complex>

#include "eitlab/fft.hpp"

namespace {

void BM_FftRoundTrip(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  eitlab::Fft fft(n);
  eitlab::ComplexVector x = eitlab::ComplexVector::Random(static_cast<Eigen::Index>(n));
  eitlab::ComplexVector y(x.size());
  for (auto _ : state) {
    fft.forward(x.data(), y.data());
    fft.inverse(y.data(), x.data());
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_FftRoundTrip)->RangeMultiplier(4)->Range(256, 16384);

}  // namespace
