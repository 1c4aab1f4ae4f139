#include <benchmark/benchmark.h>

#include "ecc/engine.hpp"
#include "ecc/examine.hpp"
#include "ecc/simulator.hpp"

namespace {

ecc::DerivedModel model(int n, double theta, int workers = 1) {
  ecc::ModelConfig c;
  c.n_nodes = n;
  c.theta = theta;
  c.workers = workers;
  return ecc::derive(c);
}

// A chain three events deep, the typical depth of a surviving chain at N=10.
ecc::Chain sample_chain(const ecc::DerivedModel& m) {
  ecc::Chain c;
  for (int k = 0; k < 3; ++k) {
    const auto next = k == 0 ? ecc::initial_events(m) : ecc::examine(m, c).next;
    c = c.extend(next.front().event, next.front().transmitters);
  }
  return c;
}

}  // namespace

static void BM_Examine(benchmark::State& state) {
  const auto m = model(static_cast<int>(state.range(0)), 1e-5);
  const auto c = sample_chain(m);
  for (auto _ : state) benchmark::DoNotOptimize(ecc::examine(m, c));
}
BENCHMARK(BM_Examine)->Arg(10)->Arg(50);

static void BM_RunEcc(benchmark::State& state) {
  const auto m = model(static_cast<int>(state.range(0)), 1e-5, static_cast<int>(state.range(1)));
  std::uint64_t chains = 0;
  for (auto _ : state) {
    const auto r = ecc::run_ecc(m);
    chains += r.examined;
  }
  state.counters["chains/s"] = benchmark::Counter(static_cast<double>(chains), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RunEcc)->Args({10, 1})->Args({10, 4})->Args({30, 1})->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
  const auto m = model(static_cast<int>(state.range(0)), 0.0);
  ecc::SimOptions opt;
  opt.runs = 10000;
  opt.keep_histogram = false;
  for (auto _ : state) benchmark::DoNotOptimize(ecc::simulate(m, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opt.runs));
}
BENCHMARK(BM_Simulate)->Arg(3)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
