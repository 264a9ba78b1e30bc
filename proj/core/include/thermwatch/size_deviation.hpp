// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "thermwatch/frame.hpp"
#include "thermwatch/mser.hpp"

namespace thermwatch {

/// One hot (above-Otsu) connected region of a scene.
struct SceneRegion {
  int region_id = 0;
  long long pixel_area = 0;
  BoundingBox bbox;
  double mean_temp_c = 0.0;
};

struct SegmentationParams {
  /// Otsu components smaller than this fraction of the frame are treated as speckle.
  double min_region_frac = 0.005;
  bool run_mser = true;
  MserParams mser;
};

struct SegmentationReport {
  std::string camera_id;
  Instant timestamp;
  double otsu_threshold_c = 0.0;
  std::vector<SceneRegion> regions;        ///< disjoint, so areas sum to <= rows * cols
  std::vector<bool> size_deviation_flags;  ///< parallel to `regions`; filled by detect_size_deviation
  std::vector<int> disappeared_tracks;     ///< baseline tracks with no region this frame
  std::vector<MserRegion> mser;
};

/// Otsu regions (speckle removed) plus, optionally, MSER regions. Flags are left empty.
SegmentationReport segment_scene(const ThermalFrame& frame, const SegmentationParams& params = {});

/// Per-camera memory of region sizes. Not thread-safe: one caller per camera.
class SizeBaseline {
 public:
  struct Track {
    int track_id = 0;
    BoundingBox bbox;
    double ema_area = 0.0;
  };

  SizeBaseline() = default;
  /// Seeds tracks directly (ids assigned 1..n), marking the baseline initialised.
  explicit SizeBaseline(std::vector<Track> tracks);

  bool initialized() const { return initialized_; }
  const std::vector<Track>& tracks() const { return tracks_; }

 private:
  friend struct DeviationTracker;
  bool initialized_ = false;
  int next_id_ = 1;
  std::vector<Track> tracks_;
};

struct DeviationResult {
  std::vector<bool> flags;            ///< per current region
  std::vector<int> track_of_region;   ///< matched or newly created track id, per current region
  std::vector<int> disappeared;       ///< track ids absent from `current`

  bool any() const;
};

struct DeviationParams {
  double rel_tol = 0.20;
  double ema_factor = 0.1;
};

/// Matches `current` regions to baseline tracks one-to-one by largest
/// bounding-box overlap (ties: lower track id, then lower region id).
/// A matched region is flagged iff |area - ema| / max(ema, 1) > rel_tol;
/// new regions and vanished tracks are always flagged. Afterwards matched
/// tracks take ema <- (1 - f) ema + f area, new regions become tracks and
/// vanished tracks are dropped.
///
/// The first call on an uninitialised baseline only seeds it (no flags).
/// Throws InvalidInput unless rel_tol > 0 and 0 < ema_factor <= 1.
DeviationResult detect_size_deviation(std::span<const SceneRegion> current, SizeBaseline& baseline,
                                      const DeviationParams& params = {});

}  // namespace thermwatch
