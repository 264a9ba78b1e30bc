// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "thermwatch/errors.hpp"

namespace thermwatch {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Asymmetric Gaussian bump on the 24 h circle.
double bump(double hour, double centre, double rise_width, double fall_width) {
  double d = std::fmod(hour - centre, 24.0);
  if (d < -12.0) d += 24.0;
  if (d >= 12.0) d -= 24.0;
  const double w = d < 0.0 ? rise_width : fall_width;
  return std::exp(-0.5 * (d / w) * (d / w));
}

struct RoiRect {
  double r0, r1, c0, c1;
};

// Fractional layout of ROIs 1..8; ROI 9 (background) takes the rest.
constexpr std::array<RoiRect, kRoiCount - 1> kLayout = {{
    {0.10, 0.20, 0.22, 0.32},  // primary terminal 1
    {0.10, 0.20, 0.40, 0.50},  // primary terminal 2
    {0.12, 0.22, 0.58, 0.64},  // secondary terminal 1
    {0.12, 0.22, 0.70, 0.76},  // secondary terminal 2
    {0.20, 0.45, 0.24, 0.30},  // HV bushing 1
    {0.20, 0.45, 0.42, 0.48},  // HV bushing 2
    {0.22, 0.45, 0.62, 0.72},  // LV bushing
    {0.45, 0.88, 0.15, 0.85},  // transformer body
}};

std::vector<std::uint8_t> layout_labels(int rows, int cols) {
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(rows) * cols, kRoiCount);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (r == 0 || c == 0 || r == rows - 1 || c == cols - 1) {
        labels[static_cast<std::size_t>(r) * cols + c] = 0;
      }
    }
  }
  for (std::size_t i = 0; i < kLayout.size(); ++i) {
    const RoiRect& rect = kLayout[i];
    const int r0 = static_cast<int>(rect.r0 * rows);
    const int r1 = std::max(r0 + 1, static_cast<int>(rect.r1 * rows));
    const int c0 = static_cast<int>(rect.c0 * cols);
    const int c1 = std::max(c0 + 1, static_cast<int>(rect.c1 * cols));
    for (int r = r0; r < r1; ++r) {
      for (int c = c0; c < c1; ++c) labels[static_cast<std::size_t>(r) * cols + c] = static_cast<std::uint8_t>(i + 1);
    }
  }
  return labels;
}

const std::vector<std::uint8_t>& cached_layout(int rows, int cols) {
  thread_local std::map<std::pair<int, int>, std::vector<std::uint8_t>> cache;
  auto [it, inserted] = cache.try_emplace({rows, cols});
  if (inserted) it->second = layout_labels(rows, cols);
  return it->second;
}

}  // namespace

const char* to_string(LinkType link) { return link == LinkType::ethernet ? "ethernet" : "radio"; }

LinkType parse_link(std::string_view text) {
  if (text == "ethernet") return LinkType::ethernet;
  if (text == "radio") return LinkType::radio;
  throw ParseError("unknown link type '" + std::string(text) + "' (expected ethernet or radio)");
}

Seconds acquisition_interval(LinkType link) {
  return link == LinkType::ethernet ? Seconds{60} : Seconds{300};
}

double profile_value(const DailyProfile& p, Seconds time_of_day) {
  const double hour = static_cast<double>(time_of_day.count()) / 3600.0;
  const double ambient =
      p.ambient_mean_c + p.ambient_amplitude_c * std::cos(2.0 * std::numbers::pi * (hour - 15.0) / 24.0);
  const double duck = 0.35 * bump(hour, 8.0, 1.5, 2.0) + bump(hour, p.peak_hour, 2.5, 1.5);
  return ambient + p.load_peak_c * duck;
}

void SceneSpec::validate() const {
  if (rows < 16 || cols < 16) throw InvalidInput("scene must be at least 16x16 pixels");
  if (!(noise_sigma_c >= 0.0) || !std::isfinite(noise_sigma_c)) {
    throw InvalidInput("noise_sigma_c must be finite and >= 0");
  }
  for (const DailyProfile& p : rois) {
    if (!std::isfinite(p.ambient_mean_c) || !std::isfinite(p.ambient_amplitude_c) ||
        !std::isfinite(p.load_peak_c) || !(p.peak_hour >= 0.0 && p.peak_hour < 24.0)) {
      throw InvalidInput("ROI profile values must be finite with peak_hour in [0, 24)");
    }
  }
}

SceneSpec default_scene(std::uint64_t rng_seed) {
  SceneSpec s;
  s.rng_seed = rng_seed;
  const DailyProfile terminal{52.0, 6.0, 20.0, 19.5};
  const DailyProfile secondary{48.0, 6.0, 18.0, 19.5};
  const DailyProfile bushing{45.0, 6.0, 16.0, 19.5};
  const DailyProfile body{38.0, 6.0, 12.0, 19.5};
  const DailyProfile background{20.0, 6.0, 0.0, 19.5};
  s.rois = {terminal, terminal, secondary, secondary, bushing, bushing, bushing, body, background};
  return s;
}

RoiMaskSet scene_mask(const std::string& camera_id, const SceneSpec& scene) {
  scene.validate();
  return RoiMaskSet(camera_id, scene.rows, scene.cols, cached_layout(scene.rows, scene.cols));
}

std::vector<CameraConfig> default_topology(std::uint64_t rng_seed, const SceneSpec& scene) {
  std::vector<CameraConfig> out;
  int index = 0;
  for (int pc = 1; pc <= 9; ++pc) {
    const int per_pc = pc <= 2 ? 3 : 2;
    for (int k = 0; k < per_pc; ++k) {
      ++index;
      CameraConfig cfg;
      char id[16];
      std::snprintf(id, sizeof id, "cam%02d", index);
      cfg.camera_id = id;
      cfg.pc_id = pc;
      cfg.link = pc <= 6 ? LinkType::ethernet : LinkType::radio;
      cfg.scene = scene;
      cfg.scene.rng_seed = splitmix64(rng_seed ^ static_cast<std::uint64_t>(index));
      out.push_back(std::move(cfg));
    }
  }
  return out;
}

void validate_configs(std::span<const CameraConfig> configs) {
  std::set<std::string> ids;
  for (const CameraConfig& c : configs) {
    validate_camera_id(c.camera_id);
    if (!ids.insert(c.camera_id).second) throw InvalidInput("duplicate camera_id '" + c.camera_id + "'");
    if (c.pc_id < 1 || c.pc_id > 9) throw InvalidInput("pc_id for '" + c.camera_id + "' must be in 1..9");
    c.scene.validate();
  }
}

const char* to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::hot_spot:
      return "hot_spot";
    case AnomalyKind::vegetation_growth:
      return "vegetation_growth";
    case AnomalyKind::intruder:
      return "intruder";
  }
  return "?";
}

AnomalyKind parse_anomaly_kind(std::string_view text) {
  if (text == "hot_spot") return AnomalyKind::hot_spot;
  if (text == "vegetation_growth") return AnomalyKind::vegetation_growth;
  if (text == "intruder") return AnomalyKind::intruder;
  throw ParseError("unknown anomaly kind '" + std::string(text) + "'");
}

void AnomalyScript::validate() const {
  for (const AnomalyEvent& e : events) {
    validate_camera_id(e.camera_id);
    if (!(e.start < e.end)) throw InvalidInput("anomaly on '" + e.camera_id + "' must have start < end");
    if (!std::isfinite(e.magnitude)) throw InvalidInput("anomaly magnitude must be finite");
    switch (e.kind) {
      case AnomalyKind::hot_spot:
        if (!valid_roi(e.roi_id)) throw InvalidInput("hot_spot needs roi in 1..9");
        break;
      case AnomalyKind::vegetation_growth:
        if (!(e.magnitude > 0.0)) throw InvalidInput("vegetation_growth needs a positive growth rate");
        break;
      case AnomalyKind::intruder:
        if (!(e.radius_px > 0.0)) throw InvalidInput("intruder needs a positive radius");
        break;
    }
  }
}

std::vector<Capture> next_capture_times(std::span<const CameraConfig> configs, Instant from,
                                        Instant until) {
  std::vector<Capture> out;
  if (!(from < until)) return out;
  for (const CameraConfig& c : configs) {
    const long long step = c.interval().count();
    long long t = to_unix(from);
    const long long rem = ((t % step) + step) % step;
    if (rem != 0) t += step - rem;
    for (; t < to_unix(until); t += step) out.push_back({from_unix(t), c.camera_id});
  }
  std::sort(out.begin(), out.end(), [](const Capture& a, const Capture& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.camera_id < b.camera_id;
  });
  return out;
}

ThermalFrame simulate_frame(const CameraConfig& config, const AnomalyScript& script, Instant t) {
  const SceneSpec& scene = config.scene;
  const int rows = scene.rows;
  const int cols = scene.cols;
  const auto& labels = cached_layout(rows, cols);
  const Seconds tod = time_of_day(t);

  std::array<double, kRoiCount + 1> base{};
  for (RoiId id = 1; id <= kRoiCount; ++id) {
    base[static_cast<std::size_t>(id)] = profile_value(scene.rois[static_cast<std::size_t>(id - 1)], tod);
  }
  base[0] = base[kRoiCount];  // unassigned pixels read as background

  std::vector<double> px(labels.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = base[labels[i]];

  auto paint_disc = [&](double cr, double cc, double radius, double value) {
    const double r2 = radius * radius;
    const int rlo = std::max(0, static_cast<int>(std::floor(cr - radius)));
    const int rhi = std::min(rows - 1, static_cast<int>(std::ceil(cr + radius)));
    const int clo = std::max(0, static_cast<int>(std::floor(cc - radius)));
    const int chi = std::min(cols - 1, static_cast<int>(std::ceil(cc + radius)));
    for (int r = rlo; r <= rhi; ++r) {
      for (int c = clo; c <= chi; ++c) {
        const double dr = r - cr;
        const double dc = c - cc;
        if (dr * dr + dc * dc <= r2) px[static_cast<std::size_t>(r) * cols + c] = value;
      }
    }
  };

  for (const AnomalyEvent& e : script.events) {
    if (e.camera_id != config.camera_id || !e.active_at(t) || e.kind != AnomalyKind::hot_spot) continue;
    for (std::size_t i = 0; i < px.size(); ++i) {
      if (labels[i] == e.roi_id) px[i] += e.magnitude;
    }
  }
  for (const AnomalyEvent& e : script.events) {
    if (e.camera_id != config.camera_id || !e.active_at(t)) continue;
    if (e.kind == AnomalyKind::vegetation_growth) {
      const double hours = static_cast<double>((t - e.start).count()) / 3600.0;
      const double area = e.magnitude * hours;
      paint_disc(e.center_row, e.center_col, std::sqrt(area / std::numbers::pi), base[kRoiCount]);
    }
  }
  for (const AnomalyEvent& e : script.events) {
    if (e.camera_id != config.camera_id || !e.active_at(t)) continue;
    if (e.kind == AnomalyKind::intruder) paint_disc(e.center_row, e.center_col, e.radius_px, e.magnitude);
  }

  if (scene.noise_sigma_c > 0.0) {
    const std::uint64_t key = splitmix64(scene.rng_seed ^ splitmix64(fnv1a(config.camera_id)) ^
                                         splitmix64(static_cast<std::uint64_t>(to_unix(t))));
    std::mt19937_64 rng(key);
    std::normal_distribution<double> noise(0.0, scene.noise_sigma_c);
    for (double& v : px) v += noise(rng);
  }
  return ThermalFrame(config.camera_id, t, rows, cols, std::move(px));
}

FleetReport run_fleet(std::span<const CameraConfig> configs, const AnomalyScript& script,
                      Instant from, Instant until, const std::map<int, FrameSink>& sinks) {
  validate_configs(configs);
  script.validate();
  std::map<std::string, const CameraConfig*> by_id;
  for (const CameraConfig& c : configs) {
    if (!sinks.count(c.pc_id)) throw InvalidInput("no sink for pc " + std::to_string(c.pc_id));
    by_id[c.camera_id] = &c;
  }

  FleetReport report;
  for (const Capture& cap : next_capture_times(configs, from, until)) {
    const CameraConfig& cfg = *by_id.at(cap.camera_id);
    const ThermalFrame frame = simulate_frame(cfg, script, cap.time);
    ++report.frames_generated;
    try {
      sinks.at(cfg.pc_id)(frame, cfg);
      ++report.frames_delivered;
    } catch (const std::exception& e) {
      report.failures.push_back({cap.time, cap.camera_id, e.what()});
    }
  }
  return report;
}

}  // namespace thermwatch
