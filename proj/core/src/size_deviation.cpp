// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/size_deviation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "thermwatch/errors.hpp"
#include "thermwatch/segmentation.hpp"

namespace thermwatch {

SegmentationReport segment_scene(const ThermalFrame& frame, const SegmentationParams& params) {
  SegmentationReport report;
  report.camera_id = frame.camera_id();
  report.timestamp = frame.timestamp();

  const OtsuSegmentation otsu = segment_otsu(frame);
  report.otsu_threshold_c = otsu.threshold_c;
  const double min_area = params.min_region_frac * static_cast<double>(frame.size());
  for (const Component& comp : otsu.foreground.components) {
    if (static_cast<double>(comp.area) < min_area) continue;
    report.regions.push_back({static_cast<int>(report.regions.size()) + 1, comp.area, comp.bbox,
                              comp.mean_temp_c});
  }
  if (params.run_mser) report.mser = mser_regions(frame, params.mser);
  return report;
}

SizeBaseline::SizeBaseline(std::vector<Track> tracks) : initialized_(true), tracks_(std::move(tracks)) {
  for (auto& t : tracks_) t.track_id = next_id_++;
}

bool DeviationResult::any() const {
  return !disappeared.empty() || std::find(flags.begin(), flags.end(), true) != flags.end();
}

struct DeviationTracker {
  static DeviationResult run(std::span<const SceneRegion> current, SizeBaseline& baseline,
                             const DeviationParams& params) {
    DeviationResult result;
    result.flags.assign(current.size(), false);
    result.track_of_region.assign(current.size(), 0);

    if (!baseline.initialized_) {
      baseline.initialized_ = true;
      for (std::size_t i = 0; i < current.size(); ++i) {
        const int id = baseline.next_id_++;
        baseline.tracks_.push_back({id, current[i].bbox, static_cast<double>(current[i].pixel_area)});
        result.track_of_region[i] = id;
      }
      return result;
    }

    struct Pair {
      long long overlap;
      std::size_t track;
      std::size_t region;
    };
    std::vector<Pair> pairs;
    for (std::size_t t = 0; t < baseline.tracks_.size(); ++t) {
      for (std::size_t r = 0; r < current.size(); ++r) {
        const long long ov = overlap_area(baseline.tracks_[t].bbox, current[r].bbox);
        if (ov > 0) pairs.push_back({ov, t, r});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      if (a.overlap != b.overlap) return a.overlap > b.overlap;
      const int ta = baseline.tracks_[a.track].track_id;
      const int tb = baseline.tracks_[b.track].track_id;
      if (ta != tb) return ta < tb;
      return current[a.region].region_id < current[b.region].region_id;
    });

    std::vector<int> match_of_track(baseline.tracks_.size(), -1);
    std::vector<int> match_of_region(current.size(), -1);
    for (const Pair& p : pairs) {
      if (match_of_track[p.track] >= 0 || match_of_region[p.region] >= 0) continue;
      match_of_track[p.track] = static_cast<int>(p.region);
      match_of_region[p.region] = static_cast<int>(p.track);
    }

    std::vector<SizeBaseline::Track> next;
    for (std::size_t t = 0; t < baseline.tracks_.size(); ++t) {
      SizeBaseline::Track track = baseline.tracks_[t];
      const int r = match_of_track[t];
      if (r < 0) {
        result.disappeared.push_back(track.track_id);
        continue;
      }
      const auto& region = current[static_cast<std::size_t>(r)];
      const double area = static_cast<double>(region.pixel_area);
      const double deviation = std::abs(area - track.ema_area) / std::max(track.ema_area, 1.0);
      result.flags[static_cast<std::size_t>(r)] = deviation > params.rel_tol;
      result.track_of_region[static_cast<std::size_t>(r)] = track.track_id;
      track.ema_area = (1.0 - params.ema_factor) * track.ema_area + params.ema_factor * area;
      track.bbox = region.bbox;
      next.push_back(track);
    }
    for (std::size_t r = 0; r < current.size(); ++r) {
      if (match_of_region[r] >= 0) continue;
      const int id = baseline.next_id_++;
      result.flags[r] = true;
      result.track_of_region[r] = id;
      next.push_back({id, current[r].bbox, static_cast<double>(current[r].pixel_area)});
    }
    std::sort(next.begin(), next.end(),
              [](const auto& a, const auto& b) { return a.track_id < b.track_id; });
    baseline.tracks_ = std::move(next);
    return result;
  }
};

DeviationResult detect_size_deviation(std::span<const SceneRegion> current, SizeBaseline& baseline,
                                      const DeviationParams& params) {
  if (!(params.rel_tol > 0.0)) throw InvalidInput("detect_size_deviation: rel_tol must be > 0");
  if (!(params.ema_factor > 0.0 && params.ema_factor <= 1.0)) {
    throw InvalidInput("detect_size_deviation: ema_factor must be in (0, 1]");
  }
  return DeviationTracker::run(current, baseline, params);
}

}  // namespace thermwatch
