// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "thermwatch/errors.hpp"
#include "thermwatch/simulation.hpp"

using namespace thermwatch;
using namespace std::chrono_literals;

namespace {

const Instant kStart = from_unix(1717200000);  // 2024-06-01T00:00:00Z

CameraConfig camera(const std::string& id, int pc, LinkType link, double noise = 0.0) {
  CameraConfig c{id, pc, link, default_scene(11)};
  c.scene.noise_sigma_c = noise;
  return c;
}

AnomalyEvent hot_spot(const std::string& cam, RoiId roi, Instant from, Instant to, double mag) {
  AnomalyEvent e;
  e.kind = AnomalyKind::hot_spot;
  e.camera_id = cam;
  e.roi_id = roi;
  e.start = from;
  e.end = to;
  e.magnitude = mag;
  return e;
}

}  // namespace

TEST_CASE("acquisition intervals") {
  CHECK(acquisition_interval(LinkType::ethernet) == 60s);
  CHECK(acquisition_interval(LinkType::radio) == 300s);
  CHECK(parse_link(to_string(LinkType::radio)) == LinkType::radio);
  CHECK_THROWS_AS(parse_link("4g"), ParseError);
}

TEST_CASE("next_capture_times: examples") {
  const std::vector<CameraConfig> eth{camera("cam01", 1, LinkType::ethernet)};
  const std::vector<CameraConfig> radio{camera("cam02", 7, LinkType::radio)};
  CHECK(next_capture_times(eth, kStart, kStart + 1h).size() == 60);
  CHECK(next_capture_times(radio, kStart, kStart + 1h).size() == 12);
  CHECK(next_capture_times(std::vector<CameraConfig>{}, kStart, kStart + 1h).empty());
  CHECK(next_capture_times(eth, kStart, kStart).empty());
}

TEST_CASE("next_capture_times: spacing, order and counting oracle") {
  const auto configs = default_topology(1);
  for (const auto& [from, until] : std::vector<std::pair<Instant, Instant>>{
           {kStart, kStart + 48h}, {kStart + 17s, kStart + 3h + 4min + 1s}, {kStart + 299s, kStart + 301s}}) {
    const auto caps = next_capture_times(configs, from, until);
    std::size_t expected = 0;
    for (const auto& c : configs) expected += oracle::capture_count(to_unix(from), to_unix(until), c.interval().count());
    CHECK(caps.size() == expected);
    for (std::size_t i = 1; i < caps.size(); ++i) {
      REQUIRE((caps[i - 1].time < caps[i].time ||
               (caps[i - 1].time == caps[i].time && caps[i - 1].camera_id < caps[i].camera_id)));
    }
    std::map<std::string, Instant> last;
    for (const auto& c : caps) {
      REQUIRE(c.time >= from);
      REQUIRE(c.time < until);
      const auto it = std::find_if(configs.begin(), configs.end(), [&](auto& k) { return k.camera_id == c.camera_id; });
      REQUIRE(to_unix(c.time) % it->interval().count() == 0);
      if (last.count(c.camera_id)) REQUIRE(c.time - last[c.camera_id] == it->interval());
      last[c.camera_id] = c.time;
    }
  }
}

TEST_CASE("default topology: 20 cameras on 9 PCs") {
  const auto configs = default_topology(5);
  CHECK(configs.size() == 20);
  std::map<int, int> per_pc;
  int radio = 0;
  std::set<std::string> ids;
  for (const auto& c : configs) {
    ++per_pc[c.pc_id];
    ids.insert(c.camera_id);
    if (c.link == LinkType::radio) ++radio;
  }
  CHECK(per_pc.size() == 9);
  for (const auto& [pc, n] : per_pc) CHECK((n == 2 || n == 3));
  CHECK(ids.size() == 20);
  CHECK(radio == 6);
  CHECK_NOTHROW(validate_configs(configs));

  auto dup = configs;
  dup[1].camera_id = dup[0].camera_id;
  CHECK_THROWS_AS(validate_configs(dup), InvalidInput);
  auto bad_pc = configs;
  bad_pc[0].pc_id = 10;
  CHECK_THROWS_AS(validate_configs(bad_pc), InvalidInput);
}

TEST_CASE("scene: ROI ordering of the default profile") {
  const SceneSpec s = default_scene();
  CHECK_NOTHROW(s.validate());
  for (Seconds tod = 0s; tod < 24h; tod += 30min) {
    const double bg = profile_value(s.rois[8], tod);
    const double body = profile_value(s.rois[7], tod);
    CHECK(body > bg);
    for (int i = 0; i < 7; ++i) CHECK(profile_value(s.rois[static_cast<std::size_t>(i)], tod) > body);
  }
  // Evening peak dominates for a loaded ROI.
  CHECK(profile_value(s.rois[0], 19h + 30min) > profile_value(s.rois[0], 8h));
  SceneSpec tiny = s;
  tiny.rows = 8;
  CHECK_THROWS_AS(tiny.validate(), InvalidInput);
  SceneSpec noisy = s;
  noisy.noise_sigma_c = -1.0;
  CHECK_THROWS_AS(noisy.validate(), InvalidInput);
}

TEST_CASE("simulate_frame: noiseless pixels equal the profile exactly") {
  const CameraConfig cam = camera("cam03", 2, LinkType::ethernet);
  const RoiMaskSet mask = scene_mask("cam03", cam.scene);
  for (Instant t : {kStart, kStart + 7h + 13min, kStart + 19h + 30min}) {
    const ThermalFrame f = simulate_frame(cam, {}, t);
    CHECK(mask.matches(f));
    for (RoiId id = 1; id <= kRoiCount; ++id) {
      const double base = profile_value(cam.scene.rois[static_cast<std::size_t>(id - 1)], time_of_day(t));
      for (std::size_t i : mask.pixels_of(id)) REQUIRE(f.pixels()[i] == base);
    }
  }
}

TEST_CASE("simulate_frame: hot_spot adds exactly its magnitude to one ROI") {
  const CameraConfig cam = camera("cam03", 2, LinkType::ethernet);
  const RoiMaskSet mask = scene_mask("cam03", cam.scene);
  const Instant t = kStart + 10h;
  const AnomalyScript script{{hot_spot("cam03", 2, kStart + 9h, kStart + 11h, 25.0)}};
  const ThermalFrame plain = simulate_frame(cam, {}, t);
  const ThermalFrame hot = simulate_frame(cam, script, t);
  const auto roi2 = mask.pixels_of(2);
  const std::set<std::size_t> in2(roi2.begin(), roi2.end());
  for (std::size_t i = 0; i < plain.size(); ++i) {
    if (in2.count(i)) {
      REQUIRE(hot.pixels()[i] == plain.pixels()[i] + 25.0);
    } else {
      REQUIRE(hot.pixels()[i] == plain.pixels()[i]);
    }
  }
}

TEST_CASE("simulate_frame: determinism and anomaly locality") {
  const CameraConfig cam = camera("cam04", 2, LinkType::ethernet, 1.0);
  AnomalyEvent veg;
  veg.kind = AnomalyKind::vegetation_growth;
  veg.camera_id = "cam04";
  veg.center_row = 20;
  veg.center_col = 30;
  veg.start = kStart + 2h;
  veg.end = kStart + 6h;
  veg.magnitude = 100.0;
  AnomalyEvent intr = veg;
  intr.kind = AnomalyKind::intruder;
  intr.radius_px = 3.0;
  intr.magnitude = 36.6;
  intr.start = kStart + 3h;
  intr.end = kStart + 3h + 5min;
  const AnomalyScript script{{veg, intr, hot_spot("cam99", 1, kStart, kStart + 24h, 40.0)}};
  CHECK_NOTHROW(script.validate());

  for (Instant t = kStart; t < kStart + 8h; t += 17min) {
    const ThermalFrame a = simulate_frame(cam, script, t);
    REQUIRE(a == simulate_frame(cam, script, t));
    const ThermalFrame plain = simulate_frame(cam, {}, t);
    if (!veg.active_at(t) && !intr.active_at(t)) REQUIRE(a == plain);
  }
  // Noise depends on time and camera.
  CHECK_FALSE(simulate_frame(cam, {}, kStart) == simulate_frame(cam, {}, kStart + 60s));
  CameraConfig other = cam;
  other.camera_id = "cam05";
  CHECK(simulate_frame(other, {}, kStart).pixels()[100] != simulate_frame(cam, {}, kStart).pixels()[100]);

  // Vegetation covers a growing area once active.
  const ThermalFrame plain = simulate_frame(camera("cam04", 2, LinkType::ethernet), {}, kStart + 4h);
  CameraConfig quiet = camera("cam04", 2, LinkType::ethernet);
  const ThermalFrame early = simulate_frame(quiet, AnomalyScript{{veg}}, kStart + 3h);
  const ThermalFrame late = simulate_frame(quiet, AnomalyScript{{veg}}, kStart + 5h);
  auto changed = [&](const ThermalFrame& f, Instant t) {
    const ThermalFrame ref = simulate_frame(quiet, {}, t);
    int n = 0;
    for (std::size_t i = 0; i < f.size(); ++i) n += f.pixels()[i] != ref.pixels()[i];
    return n;
  };
  CHECK(changed(early, kStart + 3h) > 0);
  CHECK(changed(late, kStart + 5h) > changed(early, kStart + 3h));
  (void)plain;
}

TEST_CASE("anomaly script validation") {
  AnomalyScript s{{hot_spot("cam01", 2, kStart + 1h, kStart + 1h, 5.0)}};
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s.events[0] = hot_spot("cam01", 0, kStart, kStart + 1h, 5.0);
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  CHECK(parse_anomaly_kind("vegetation_growth") == AnomalyKind::vegetation_growth);
  CHECK_THROWS_AS(parse_anomaly_kind("fire"), ParseError);
}

TEST_CASE("run_fleet: routing, counts and failures") {
  SUBCASE("each PC sink sees only its cameras") {
    const std::vector<CameraConfig> cfg{camera("cam01", 1, LinkType::ethernet),
                                        camera("cam02", 2, LinkType::radio)};
    std::map<int, std::vector<std::string>> seen;
    std::map<int, FrameSink> sinks;
    for (int pc : {1, 2})
      sinks[pc] = [&, pc](const ThermalFrame& f, const CameraConfig&) { seen[pc].push_back(f.camera_id()); };
    const FleetReport rep = run_fleet(cfg, {}, kStart, kStart + 1h, sinks);
    CHECK(rep.frames_generated == 72);
    CHECK(rep.frames_delivered == 72);
    CHECK(seen[1].size() == 60);
    CHECK(seen[2].size() == 12);
    for (const auto& id : seen[1]) CHECK(id == "cam01");
    for (const auto& id : seen[2]) CHECK(id == "cam02");
  }
  SUBCASE("default topology over 48 h matches the schedule oracle") {
    // Small scenes keep this quick; counting is independent of scene size.
    SceneSpec small = default_scene(3);
    small.rows = small.cols = 16;
    const auto cfg = default_topology(3, small);
    std::size_t expected = 0;
    for (const auto& c : cfg) expected += oracle::capture_count(to_unix(kStart), to_unix(kStart + 48h), c.interval().count());
    CHECK(expected == 14 * 2880 + 6 * 576);
    std::size_t got = 0;
    std::map<int, FrameSink> sinks;
    for (int pc = 1; pc <= 9; ++pc) sinks[pc] = [&](const ThermalFrame&, const CameraConfig&) { ++got; };
    const FleetReport rep = run_fleet(cfg, {}, kStart, kStart + 48h, sinks);
    CHECK(rep.frames_generated == expected);
    CHECK(got == expected);
  }
  SUBCASE("zero span") {
    const std::vector<CameraConfig> cfg{camera("cam01", 1, LinkType::ethernet)};
    std::map<int, FrameSink> sinks{{1, [](const ThermalFrame&, const CameraConfig&) { FAIL("no frames expected"); }}};
    CHECK(run_fleet(cfg, {}, kStart, kStart, sinks).frames_generated == 0);
  }
  SUBCASE("a failing sink is reported and the run continues") {
    const std::vector<CameraConfig> cfg{camera("cam01", 1, LinkType::ethernet)};
    int calls = 0;
    std::map<int, FrameSink> sinks{{1, [&](const ThermalFrame& f, const CameraConfig&) {
                                      if (++calls == 3) throw std::runtime_error("disk full");
                                      (void)f;
                                    }}};
    const FleetReport rep = run_fleet(cfg, {}, kStart, kStart + 10min, sinks);
    CHECK(rep.frames_generated == 10);
    CHECK(rep.frames_delivered == 9);
    REQUIRE(rep.failures.size() == 1);
    CHECK(rep.failures[0].time == kStart + 2min);
    CHECK(rep.failures[0].message.find("disk full") != std::string::npos);
  }
  SUBCASE("missing sink") {
    const std::vector<CameraConfig> cfg{camera("cam01", 4, LinkType::ethernet)};
    CHECK_THROWS_AS(run_fleet(cfg, {}, kStart, kStart + 1h, {}), InvalidInput);
  }
}
