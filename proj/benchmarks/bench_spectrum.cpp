// Serial reference vs OpenMP-parallel grid evaluation.
#include <benchmark/benchmark.h>

#include "ringsense/grid.hpp"
#include "ringsense/linear_response.hpp"
#include "ringsense/steady_state.hpp"

using namespace ringsense;

namespace {

struct Fixture {
  SystemParams p;
  DerivedFrequencies d;
  SteadyState ss;
  std::vector<double> grid;
  SqueezeParams sq{2.0, 3.14159265358979323846, 0.0};
  Fixture() {
    d = derive_locked(p, true);
    ss = solve_steady_state(p, d);
    GridSpec spec;
    spec.points = 10000;
    grid = default_grid(d, spec);
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_spectrum_serial(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    auto out = spectrum_grid(f.grid, 1.5707963267948966, f.p, f.d, f.ss, f.sq,
                             Execution::Serial);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * f.grid.size());
}

void BM_spectrum_parallel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    auto out = spectrum_grid(f.grid, 1.5707963267948966, f.p, f.d, f.ss, f.sq,
                             Execution::Parallel);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * f.grid.size());
}

}  // namespace

BENCHMARK(BM_spectrum_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spectrum_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
