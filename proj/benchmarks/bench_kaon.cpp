#include <benchmark/benchmark.h>

#include <random>

#include "kaon/evolution.hpp"
#include "kaon/kraus.hpp"
#include "kaon/observables.hpp"

namespace {

const kaon::Momentum kP = kaon::Momentum::along_z("p", 1.0, 0.0);
const kaon::Momentum kQ = kaon::Momentum::along_z("q", 1.0, -0.75);

kaon::PhysicalParams params() { return kaon::preset("kaon-like").params; }

kaon::Layout layout_for(int identical) {
  return identical ? kaon::identical_layout(kP, kQ) : kaon::distinguishable_layout(kP, kQ);
}

void BM_BuildKraus(benchmark::State& state) {
  const auto p = params();
  const kaon::SpaceLayout layout({kP, kQ});
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kaon::build_kraus(p, layout, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_BuildKraus);

void BM_Evolve(benchmark::State& state) {
  const auto p = params();
  const kaon::Layout layout = layout_for(static_cast<int>(state.range(0)));
  const kaon::Mode mode = state.range(0) ? kaon::Mode::identical : kaon::Mode::distinguishable;
  const kaon::DensityOperator rho = kaon::singlet_state(layout, mode);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kaon::evolve(rho, p, 2.5));
  }
}
BENCHMARK(BM_Evolve)->Arg(0)->Arg(1);

void BM_CorrelationGrid(benchmark::State& state) {
  const auto p = params();
  const int identical = static_cast<int>(state.range(0));
  const kaon::Layout layout = layout_for(identical);
  const kaon::Mode mode = identical ? kaon::Mode::identical : kaon::Mode::distinguishable;
  const kaon::DensityOperator rho = kaon::singlet_state(layout, mode);
  const auto a = kaon::pair_observable(layout, kaon::parse_observable("S@p"), mode);
  const auto b = kaon::pair_observable(layout, kaon::parse_observable("S@q"), mode);
  std::vector<double> grid(static_cast<std::size_t>(state.range(1)));
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 0.5 * static_cast<double>(i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kaon::correlation_grid(rho, a, b, p, grid, grid, mode));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1) * state.range(1));
}
BENCHMARK(BM_CorrelationGrid)->Args({0, 20})->Args({1, 20})->Unit(benchmark::kMillisecond);

void BM_JointProbability(benchmark::State& state) {
  const auto p = params();
  const int identical = static_cast<int>(state.range(0));
  const kaon::Layout layout = layout_for(identical);
  const kaon::Mode mode = identical ? kaon::Mode::identical : kaon::Mode::distinguishable;
  const kaon::DensityOperator rho = kaon::singlet_state(layout, mode);
  const auto pa = kaon::detection_projector(layout, kaon::Flavor::K0, "p", mode);
  const auto pb = kaon::detection_projector(layout, kaon::Flavor::K0bar, "q", mode);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kaon::joint_probability(rho, pa, pb, p, 1.0, 3.0));
  }
}
BENCHMARK(BM_JointProbability)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
