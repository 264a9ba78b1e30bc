// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "thermwatch/extraction.hpp"
#include "thermwatch/mser.hpp"
#include "thermwatch/segmentation.hpp"
#include "thermwatch/simulation.hpp"

using namespace thermwatch;

namespace {

ThermalFrame scene_frame(int rows, int cols) {
  CameraConfig cam{"cam01", 1, LinkType::ethernet, default_scene(1)};
  cam.scene.rows = rows;
  cam.scene.cols = cols;
  cam.scene.noise_sigma_c = 1.0;
  return simulate_frame(cam, {}, from_unix(1717243200));
}

void BM_Otsu(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> count(0, 5000);
  Histogram h{};
  for (auto& c : h) c = count(rng);
  for (auto _ : state) benchmark::DoNotOptimize(otsu_threshold(h));
}
BENCHMARK(BM_Otsu);

void BM_SegmentOtsu(benchmark::State& state) {
  const ThermalFrame frame = scene_frame(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(segment_otsu(frame));
}
BENCHMARK(BM_SegmentOtsu)->Args({48, 64})->Args({240, 320});

void BM_Mser(benchmark::State& state) {
  const ThermalFrame frame = scene_frame(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(mser_regions(frame));
}
BENCHMARK(BM_Mser)->Args({48, 64})->Args({240, 320});

void BM_TopFractionMean(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> temp(40.0, 5.0);
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (double& v : values) v = temp(rng);
  for (auto _ : state) benchmark::DoNotOptimize(top_fraction_mean(values));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TopFractionMean)->Arg(100)->Arg(10000);

void BM_ExtractAll(benchmark::State& state) {
  CameraConfig cam{"cam01", 1, LinkType::ethernet, default_scene(1)};
  const ThermalFrame frame = simulate_frame(cam, {}, from_unix(1717243200));
  const RoiMaskSet masks = scene_mask("cam01", cam.scene);
  for (auto _ : state) benchmark::DoNotOptimize(extract_all(frame, masks));
}
BENCHMARK(BM_ExtractAll);

}  // namespace
