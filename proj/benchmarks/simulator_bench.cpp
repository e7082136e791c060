#include <benchmark/benchmark.h>

#include "shorsim/arithmetic.hpp"
#include "shorsim/simulator.hpp"

namespace {

using namespace shorsim;

const RegisterLayout& layout15() {
  static const RegisterLayout l = RegisterLayout::for_factoring(4);
  return l;
}

const Network& modexp15() {
  static const Network n = build_modexp(ArithParams::make(15, 7, 130), layout15());
  return n;
}

void BM_ApplyNetworkBasis(benchmark::State& state) {
  Basis b = layout15().reg1.write(0, 77);
  for (auto _ : state) benchmark::DoNotOptimize(apply_network(b, modexp15()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(modexp15().gates.size()));
}
BENCHMARK(BM_ApplyNetworkBasis);

void BM_BuildModexp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_modexp(ArithParams::make(15, 7, 130), layout15()));
}
BENCHMARK(BM_BuildModexp);

void BM_IdealRun(benchmark::State& state) {
  for (auto _ : state) {
    WatchdogClocks clocks;
    benchmark::DoNotOptimize(run(init_state(130, layout15()), modexp15(), {}, {}, clocks));
  }
}
BENCHMARK(BM_IdealRun)->Unit(benchmark::kMillisecond);

void BM_NoisyRun(benchmark::State& state) {
  const auto wd = static_cast<Watchdog>(state.range(1));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const NoiseSchedule sched =
        sample_schedule(static_cast<std::size_t>(state.range(0)), 28, seed++, ExponentialClock{2.5});
    WatchdogClocks clocks;
    benchmark::DoNotOptimize(run(init_state(130, layout15()), modexp15(), sched, {wd}, clocks));
  }
}
BENCHMARK(BM_NoisyRun)
    ->Args({10, static_cast<int>(Watchdog::Off)})
    ->Args({10, static_cast<int>(Watchdog::On)})
    ->Args({20, static_cast<int>(Watchdog::Off)})
    ->Unit(benchmark::kMillisecond);

void BM_TransformAndMeasure(benchmark::State& state) {
  const NoiseSchedule sched = sample_schedule(10, 28, 3, StaticLaw{0.5});
  WatchdogClocks clocks;
  const SparseState s = run(init_state(130, layout15()), modexp15(), sched, {}, clocks);
  state.counters["branches"] = static_cast<double>(s.size());
  for (auto _ : state) benchmark::DoNotOptimize(transform_and_measure(s, 130, layout15()));
}
BENCHMARK(BM_TransformAndMeasure)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
