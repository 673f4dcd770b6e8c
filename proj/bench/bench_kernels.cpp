#include <benchmark/benchmark.h>

#include <numbers>

#include "lpcm/config.hpp"
#include "lpcm/cycle_map.hpp"
#include "lpcm/sweep.hpp"

namespace {

lpcm::Config base_config() {
  return lpcm::parse_config(R"([converter]
m1 = 1
m2 = 1.25
t_off = 1
t_on_min = 1
i_max = 1.25

[filter]
tau = 0.5

[interference_mode]
phase = "locked"
)",
                            "bench");
}

lpcm::GridSpec small_grid() {
  return {lpcm::Axis{0.25, 1.0, 4}, lpcm::Axis{0.0, 0.1, 3}, lpcm::Axis{0.5, 2.0, 3}};
}

lpcm::SweepOptions sweep_options() {
  lpcm::SweepOptions opt;
  opt.n_phases = 4;
  opt.n_inits = 3;
  opt.n_cycles = 200;
  return opt;
}

void BM_SweepParallel(benchmark::State& state) {
  const auto cfg = base_config();
  for (auto _ : state) benchmark::DoNotOptimize(lpcm::sweep(cfg, small_grid(), sweep_options()));
}
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = base_config();
  for (auto _ : state) benchmark::DoNotOptimize(lpcm::sweep_serial(cfg, small_grid(), sweep_options()));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

lpcm::InterferenceSpec tone() {
  lpcm::InterferenceSpec is;
  is.phase_mode = lpcm::PhaseMode::locked;
  is.components.push_back({0.05, 2.0 * std::numbers::pi, 0.3});
  return is;
}

void BM_ContinuityParallel(benchmark::State& state) {
  const auto cfg = base_config();
  const auto is = tone();
  for (auto _ : state)
    benchmark::DoNotOptimize(lpcm::continuity_check(cfg.converter, cfg.filter, is, true));
}
BENCHMARK(BM_ContinuityParallel)->Unit(benchmark::kMillisecond);

void BM_ContinuitySerial(benchmark::State& state) {
  const auto cfg = base_config();
  const auto is = tone();
  for (auto _ : state)
    benchmark::DoNotOptimize(lpcm::continuity_check_serial(cfg.converter, cfg.filter, is, true));
}
BENCHMARK(BM_ContinuitySerial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
