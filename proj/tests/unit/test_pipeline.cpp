// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <map>

#include "doctest.h"
#include "thermwatch/errors.hpp"
#include "thermwatch/pipeline.hpp"
#include "thermwatch/simulation.hpp"

using namespace thermwatch;
using namespace std::chrono_literals;

namespace {

const Instant kStart = from_unix(1717200000);

CameraConfig cam(const std::string& id, LinkType link, double noise = 0.0) {
  CameraConfig c{id, 1, link, default_scene(21)};
  c.scene.noise_sigma_c = noise;
  return c;
}

DetectionPipeline pipeline_for(const std::vector<CameraConfig>& cams, bool segment = false) {
  std::map<std::string, RoiMaskSet> masks;
  for (const auto& c : cams) masks.emplace(c.camera_id, scene_mask(c.camera_id, c.scene));
  PipelineOptions opt;
  opt.segment = segment;
  return DetectionPipeline(std::move(masks), opt);
}

}  // namespace

TEST_CASE("pipeline: cold start and unknown cameras") {
  const auto c = cam("cam01", LinkType::ethernet);
  auto p = pipeline_for({c});
  CHECK(p.has_camera("cam01"));
  CHECK_FALSE(p.has_camera("cam02"));
  CHECK(p.model("cam01", 1) == nullptr);

  const FrameResult r = p.process(simulate_frame(c, {}, kStart));
  for (const auto& row : r.table.rows) {
    CHECK(row.model_status == ModelStatus::cold_start);
    CHECK(row.alarm_bit == 0);
    CHECK_FALSE(row.predicted_c);
  }
  CHECK_FALSE(r.segmentation);
  REQUIRE(p.model("cam01", 5) != nullptr);
  CHECK(p.model("cam01", 5)->version == 1);

  CHECK_THROWS_AS(p.process(simulate_frame(cam("cam02", LinkType::ethernet), {}, kStart)), InvalidInput);
  CHECK_THROWS_AS(p.process(simulate_frame(c, {}, kStart)), InvalidInput);
  CHECK_THROWS_AS(p.process(simulate_frame(c, {}, kStart - 60s)), InvalidInput);
  CHECK_NOTHROW(p.process(simulate_frame(c, {}, kStart + 60s)));
}

TEST_CASE("pipeline: mask keyed under the wrong camera is rejected") {
  const auto c = cam("cam01", LinkType::ethernet);
  std::map<std::string, RoiMaskSet> masks;
  masks.emplace("cam09", scene_mask("cam01", c.scene));
  CHECK_THROWS_AS(DetectionPipeline(std::move(masks)), InvalidInput);
}

TEST_CASE("pipeline: retrain cadence and window span over three days") {
  for (LinkType link : {LinkType::ethernet, LinkType::radio}) {
    const auto c = cam("cam01", link, 1.0);
    auto p = pipeline_for({c});
    std::map<RoiId, std::vector<PredictionModel>> fits;
    p.on_retrain = [&](const PredictionModel& m) { fits[m.roi_id].push_back(m); };
    for (Instant t = kStart; t < kStart + 72h; t += c.interval()) p.process(simulate_frame(c, {}, t));
    REQUIRE(fits.size() == 9);
    for (const auto& [roi, list] : fits) {
      REQUIRE(list.size() == 6);
      for (std::size_t i = 0; i < list.size(); ++i) {
        CHECK(list[i].version == i + 1);
        CHECK(list[i].trained_at == kStart + i * 12h);
        if (i > 0) CHECK(list[i].trained_at - list[i - 1].trained_at == 720min);
        CHECK(list[i].training_window.back().timestamp == list[i].trained_at);
        CHECK(list[i].training_window.front().timestamp > list[i].trained_at - 24h);
      }
    }
  }
}

TEST_CASE("pipeline: noiseless periodic scene raises no alarms and predicts exactly") {
  const auto c = cam("cam01", LinkType::radio);
  auto p = pipeline_for({c});
  int alarms = 0, ok_rows = 0;
  for (Instant t = kStart; t < kStart + 72h; t += c.interval()) {
    const FrameResult r = p.process(simulate_frame(c, {}, t));
    for (const auto& row : r.table.rows) {
      alarms += row.alarm_bit;
      if (t >= kStart + 24h) {
        REQUIRE(row.model_status == ModelStatus::ok);
        REQUIRE(*row.predicted_c == doctest::Approx(row.recorded_c).epsilon(1e-12));
        ++ok_rows;
      }
    }
  }
  CHECK(alarms == 0);
  CHECK(ok_rows == 9 * 12 * 48);
}

TEST_CASE("pipeline: hot spot alarms on the first capture inside the window, affected ROI only") {
  for (LinkType link : {LinkType::ethernet, LinkType::radio}) {
    const auto c = cam("cam01", link);
    const Instant on = kStart + 34h + 7min, off = kStart + 36h;
    AnomalyEvent e;
    e.kind = AnomalyKind::hot_spot;
    e.camera_id = "cam01";
    e.roi_id = 6;
    e.start = on;
    e.end = off;
    e.magnitude = 25.0;
    const AnomalyScript script{{e}};
    auto p = pipeline_for({c});
    std::optional<Instant> first_alarm;
    for (Instant t = kStart; t < kStart + 40h; t += c.interval()) {
      const FrameResult r = p.process(simulate_frame(c, script, t));
      for (const auto& row : r.table.rows) {
        if (!row.alarm_bit) continue;
        REQUIRE(row.roi_id == 6);
        REQUIRE(e.active_at(t));
        if (!first_alarm) first_alarm = t;
      }
      if (e.active_at(t) && t < kStart + 36h - 1s) {
        // Still alarmed throughout the event: the model trained at 36 h has not seen it.
        REQUIRE(r.table.rows[5].alarm_bit == 1);
      }
    }
    REQUIRE(first_alarm);
    CHECK(*first_alarm >= on);
    CHECK(*first_alarm - on < c.interval());
  }
}

TEST_CASE("pipeline: segmentation is reported when enabled") {
  const auto c = cam("cam01", LinkType::ethernet, 0.5);
  auto p = pipeline_for({c}, true);
  const FrameResult first = p.process(simulate_frame(c, {}, kStart + 19h));
  REQUIRE(first.segmentation);
  CHECK_FALSE(first.segmentation->regions.empty());
  CHECK(first.segmentation->size_deviation_flags.size() == first.segmentation->regions.size());
  const FrameResult second = p.process(simulate_frame(c, {}, kStart + 19h + 60s));
  for (bool f : second.segmentation->size_deviation_flags) CHECK_FALSE(f);
  CHECK(second.segmentation->disappeared_tracks.empty());
}
