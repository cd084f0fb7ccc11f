#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "sedcurves/change_points.hpp"
#include "sedcurves/curves.hpp"
#include "sedcurves/oracle.hpp"
#include "sedcurves/types.hpp"

namespace {

using namespace sedcurves;

Dataset synthetic_dataset(int clip_count, int frames) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<std::string> classes = {"a", "b", "c"};
  const double dt = 0.02;

  Dataset dataset;
  dataset.class_names = classes;
  for (int n = 0; n < clip_count; ++n) {
    Clip clip;
    clip.id = "clip" + std::to_string(1000 + n);
    clip.duration = frames * dt;
    clip.timeline.class_names = classes;
    clip.timeline.timestamps.resize(frames + 1);
    for (int i = 0; i <= frames; ++i) clip.timeline.timestamps[i] = i * dt;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      std::vector<double> column(frames);
      for (auto& value : column) value = unit(rng);
      clip.timeline.scores.push_back(std::move(column));
      for (int e = 0; e < 2; ++e) {
        const double onset = unit(rng) * (clip.duration - 2.0);
        const double length = 0.5 + unit(rng);
        clip.events.push_back(Event{onset, onset + length, classes[c]});
      }
    }
    dataset.clips.push_back(std::move(clip));
  }
  return dataset;
}

std::vector<double> linear_grid(int count) {
  std::vector<double> taus(count);
  for (int i = 0; i < count; ++i) {
    taus[i] = 0.01 + (0.99 - 0.01) * i / (count - 1);
  }
  return taus;
}

void BM_EngineCurves(benchmark::State& state, EvalMode mode, int jobs) {
  const auto dataset =
      synthetic_dataset(static_cast<int>(state.range(0)), 1000);
  EvalParams params;
  params.mode = mode;
  for (auto _ : state) {
    auto curves = compute_statistics_curves(dataset, params, jobs);
    benchmark::DoNotOptimize(curves);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000 * 3);
}

void BM_OracleGrid(benchmark::State& state, EvalMode mode) {
  const auto dataset =
      synthetic_dataset(static_cast<int>(state.range(0)), 1000);
  const auto taus = linear_grid(50);
  EvalParams params;
  params.mode = mode;
  PsdsParams summary;
  for (auto _ : state) {
    auto result = approx_psds(dataset, taus, params, summary);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000 * 3);
}

void BM_ExactPsds(benchmark::State& state) {
  const auto dataset =
      synthetic_dataset(static_cast<int>(state.range(0)), 1000);
  const EvalParams params;
  const auto curves = compute_statistics_curves(dataset, params, 1);
  const PsdsParams summary;
  for (auto _ : state) {
    auto result = compute_psds(curves, summary);
    benchmark::DoNotOptimize(result);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_EngineCurves, collar_serial, EvalMode::collar, 1)
    ->Arg(4)
    ->Arg(16)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EngineCurves, intersection_serial, EvalMode::intersection,
                  1)
    ->Arg(4)
    ->Arg(16)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EngineCurves, intersection_jobs4, EvalMode::intersection,
                  4)
    ->Arg(4)
    ->Arg(16)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OracleGrid, intersection_50_thresholds,
                  EvalMode::intersection)
    ->Arg(4)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactPsds)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
