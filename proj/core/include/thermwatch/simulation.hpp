// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "thermwatch/frame.hpp"
#include "thermwatch/time.hpp"

namespace thermwatch {

enum class LinkType { ethernet, radio };

const char* to_string(LinkType link);
/// Throws ParseError unless "ethernet" or "radio".
LinkType parse_link(std::string_view text);

/// One image per minute over a physical link, one every five minutes over radio.
Seconds acquisition_interval(LinkType link);

/// Daily temperature profile of one ROI: a diurnal ambient sinusoid (warmest
/// mid-afternoon) plus a transformer-load "duck curve" with a small morning
/// bump and a dominant, asymmetric evening peak.
struct DailyProfile {
  double ambient_mean_c = 20.0;
  double ambient_amplitude_c = 6.0;
  double load_peak_c = 0.0;
  double peak_hour = 19.5;

  friend bool operator==(const DailyProfile&, const DailyProfile&) = default;
};

double profile_value(const DailyProfile& profile, Seconds time_of_day);

struct SceneSpec {
  int rows = 48;
  int cols = 64;
  std::array<DailyProfile, kRoiCount> rois;  ///< indexed by roi_id - 1
  double noise_sigma_c = 0.0;
  std::uint64_t rng_seed = 0;

  /// Throws InvalidInput for frames smaller than 16x16, negative noise or bad profile values.
  void validate() const;
};

/// Transformer scene with terminals and bushings hotter than the body, and the
/// body hotter than the background.
SceneSpec default_scene(std::uint64_t rng_seed = 0);

/// Fixed ROI layout for a scene of the given size (1-px unassigned border).
RoiMaskSet scene_mask(const std::string& camera_id, const SceneSpec& scene);

struct CameraConfig {
  std::string camera_id;
  int pc_id = 1;  ///< 1..=9
  LinkType link = LinkType::ethernet;
  SceneSpec scene;

  Seconds interval() const { return acquisition_interval(link); }
};

/// 20 cameras on 9 industrial PCs: PCs 1-2 host three cameras, PCs 3-9 two;
/// cameras on PCs 1-6 are cabled, those on PCs 7-9 use radio.
std::vector<CameraConfig> default_topology(std::uint64_t rng_seed, const SceneSpec& scene = default_scene());

/// Throws InvalidInput on duplicate camera ids, pc ids outside 1..9 or invalid scenes.
void validate_configs(std::span<const CameraConfig> configs);

enum class AnomalyKind { hot_spot, vegetation_growth, intruder };

const char* to_string(AnomalyKind kind);
AnomalyKind parse_anomaly_kind(std::string_view text);

/// Active on [start, end).
///  - hot_spot: adds `magnitude` degrees C to every pixel of `roi_id`.
///  - vegetation_growth: a cool disc at (center_row, center_col) whose area grows by
///    `magnitude` px per hour since `start`; covered pixels read the background ambient.
///  - intruder: a disc of `radius_px` at the centre reading `magnitude` degrees C.
struct AnomalyEvent {
  AnomalyKind kind = AnomalyKind::hot_spot;
  std::string camera_id;
  RoiId roi_id = 0;
  double center_row = 0.0;
  double center_col = 0.0;
  double radius_px = 0.0;
  Instant start;
  Instant end;
  double magnitude = 0.0;

  bool active_at(Instant t) const { return start <= t && t < end; }
};

struct AnomalyScript {
  std::vector<AnomalyEvent> events;
  /// Throws InvalidInput unless start < end and the kind's parameters are usable.
  void validate() const;
};

struct Capture {
  Instant time;
  std::string camera_id;
  friend bool operator==(const Capture&, const Capture&) = default;
};

/// Every capture in [from, until): per camera, instants at exact multiples of its
/// interval since the Unix epoch; merged by time, ties by camera id.
std::vector<Capture> next_capture_times(std::span<const CameraConfig> configs, Instant from, Instant until);

/// Deterministic synthetic frame: per-ROI profile value, plus active anomalies,
/// plus seeded Gaussian noise keyed by (scene seed, camera id, t).
ThermalFrame simulate_frame(const CameraConfig& config, const AnomalyScript& script, Instant t);

/// Processing callback of one industrial PC.
using FrameSink = std::function<void(const ThermalFrame&, const CameraConfig&)>;

struct SinkFailure {
  Instant time;
  std::string camera_id;
  std::string message;
};

struct FleetReport {
  std::size_t frames_generated = 0;
  std::size_t frames_delivered = 0;
  std::vector<SinkFailure> failures;
};

/// Generates every frame in [from, until) in capture order and hands it to the
/// sink of its camera's PC. A throwing sink is recorded in the report and the
/// run continues. Throws InvalidInput if a PC in use has no sink.
FleetReport run_fleet(std::span<const CameraConfig> configs, const AnomalyScript& script,
                      Instant from, Instant until, const std::map<int, FrameSink>& sinks);

}  // namespace thermwatch
