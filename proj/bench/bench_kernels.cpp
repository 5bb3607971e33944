// Serial reference kernels against their OpenMP counterparts on the bundled
// map at 2 m (300 x 300 cells). Argument 0 runs serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "fmplan/angles.hpp"
#include "fmplan/pipeline.hpp"

using namespace fmplan;

namespace {

RunConfig bench_config() {
  RunConfig cfg = load_config(std::filesystem::path(FMPLAN_EXAMPLES_DIR) / "single_goal.json");
  cfg.resolution = 2.0;
  cfg.gaussian_sigma = 16.0;
  return cfg;
}

struct Fixture {
  RunConfig cfg = bench_config();
  Stages stages = generate_stages(cfg, Exec::Serial);
  std::vector<VehicleState> starts;

  Fixture() {
    std::mt19937 rng(5);
    const CompleteMap& m = stages.complete;
    std::uniform_real_distribution<double> ux(0.0, m.width() * m.resolution());
    std::uniform_real_distribution<double> uy(0.0, m.height() * m.resolution());
    std::uniform_real_distribution<double> ua(0.0, kTwoPi);
    while (starts.size() < 64) {
      const VehicleState s{ux(rng), uy(rng), ua(rng), 0.0};
      if (m.safe_start(m.cell_at(s.x, s.y))) starts.push_back(s);
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_Brushfire(benchmark::State& state) {
  const Fixture& f = fixture();
  const int waves = f.stages.complete.buffer_cells();
  for (auto _ : state) benchmark::DoNotOptimize(brushfire(f.stages.bitmap.cells(), waves, mode(state)));
  label(state);
}

void BM_Wavefront(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(expand_wavefront(f.stages.complete, mode(state)));
  label(state);
}

void BM_RawField(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(raw_field(f.stages.cost, f.stages.complete, f.stages.goals, mode(state)));
  }
  label(state);
}

void BM_Transition(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(transition_field(f.stages.raw, f.stages.path, f.stages.border, f.cfg.transition,
                                              mode(state)));
  }
  label(state);
}

void BM_Smoothing(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(smooth_field(f.stages.transition, f.cfg.gaussian_sigma, mode(state)));
  }
  label(state);
}

void BM_SimulateBatch(benchmark::State& state) {
  const Fixture& f = fixture();
  const GoalSpec goal = goal_spec(f.cfg, f.stages.goals, f.cfg.resolution);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_batch(f.starts, f.stages.complete, f.stages.smoothed, f.cfg.plan_params(),
                                            goal, f.cfg.sim_options(), mode(state)));
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_Brushfire)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wavefront)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RawField)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Transition)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Smoothing)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
