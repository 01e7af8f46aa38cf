// Serial reference vs OpenMP kernels on the same work.
//   bench_kernels --benchmark_filter=ber

#include <benchmark/benchmark.h>

#include "fgmimo/harness.hpp"

namespace {

using namespace fgmimo;

ExperimentConfig config_for(int n) {
  ExperimentConfig c;
  c.nt = c.nr = n;
  c.channel_ensemble = 32;
  return c;
}

TrialSetup setup_for(const std::vector<ComplexMatrix>& channels, int n) {
  TrialSetup s;
  s.channels = &channels;
  s.nt = s.nr = n;
  s.snr_db = 10.0;
  s.detector.max_iterations = 10;
  return s;
}

void ber_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto channels = ensemble_channels(config_for(n));
  const TrialSetup s = setup_for(channels, n);
  for (auto _ : state) benchmark::DoNotOptimize(ber_trials_serial(s, 0, 256));
  state.SetItemsProcessed(state.iterations() * 256);
}

void ber_parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto channels = ensemble_channels(config_for(n));
  const TrialSetup s = setup_for(channels, n);
  for (auto _ : state) benchmark::DoNotOptimize(ber_trials_parallel(s, 0, 256, 0));
  state.SetItemsProcessed(state.iterations() * 256);
}

void ami_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto channels = ensemble_channels(config_for(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ensemble_ami_serial(channels, n, n, Modulation::qpsk, 10.0, 20));
  }
}

void ami_parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto channels = ensemble_channels(config_for(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ensemble_ami_parallel(channels, n, n, Modulation::qpsk, 10.0, 20, {}, 0));
  }
}

}  // namespace

BENCHMARK(ber_serial)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(ber_parallel)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(ami_serial)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(ami_parallel)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
