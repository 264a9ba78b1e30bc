// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <map>

#include "thermwatch/pipeline.hpp"
#include "thermwatch/simulation.hpp"

using namespace thermwatch;

namespace {

const Instant kStart = from_unix(1717200000);

void BM_SimulateFrame(benchmark::State& state) {
  CameraConfig cam{"cam01", 1, LinkType::ethernet, default_scene(1)};
  cam.scene.noise_sigma_c = 1.0;
  Instant t = kStart;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_frame(cam, {}, t));
    t += Seconds{60};
  }
}
BENCHMARK(BM_SimulateFrame);

// One camera-day at 1-minute cadence; arg 1 enables segmentation.
void BM_PipelineDay(benchmark::State& state) {
  CameraConfig cam{"cam01", 1, LinkType::ethernet, default_scene(1)};
  cam.scene.noise_sigma_c = 1.0;
  std::vector<ThermalFrame> frames;
  for (const Capture& c : next_capture_times({&cam, 1}, kStart, kStart + Seconds{86400})) {
    frames.push_back(simulate_frame(cam, {}, c.time));
  }
  PipelineOptions options;
  options.segment = state.range(0) != 0;
  for (auto _ : state) {
    DetectionPipeline pipeline({{cam.camera_id, scene_mask(cam.camera_id, cam.scene)}}, options);
    for (const ThermalFrame& f : frames) benchmark::DoNotOptimize(pipeline.process(f));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(frames.size()));
}
BENCHMARK(BM_PipelineDay)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
