// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/pipeline.hpp"

#include <algorithm>

#include "thermwatch/errors.hpp"
#include "thermwatch/extraction.hpp"

namespace thermwatch {

DetectionPipeline::DetectionPipeline(std::map<std::string, RoiMaskSet> masks, PipelineOptions options)
    : options_(std::move(options)) {
  options_.policy.validate();
  for (auto& [id, mask] : masks) {
    if (id != mask.camera_id()) throw InvalidInput("mask keyed '" + id + "' belongs to '" + mask.camera_id() + "'");
    cameras_.emplace(id, CameraState{std::move(mask), std::nullopt, {}, {}});
  }
}

const PredictionModel* DetectionPipeline::model(const std::string& camera_id, RoiId roi_id) const {
  auto it = cameras_.find(camera_id);
  if (it == cameras_.end() || !valid_roi(roi_id)) return nullptr;
  const auto& m = it->second.rois[static_cast<std::size_t>(roi_id - 1)].model;
  return m ? &*m : nullptr;
}

FrameResult DetectionPipeline::process(const ThermalFrame& frame) {
  auto it = cameras_.find(frame.camera_id());
  if (it == cameras_.end()) throw InvalidInput("no mask for camera '" + frame.camera_id() + "'");
  CameraState& cam = it->second;
  if (cam.last_seen && !(*cam.last_seen < frame.timestamp())) {
    throw InvalidInput("frame for '" + frame.camera_id() + "' at " + format_iso8601(frame.timestamp()) +
                       " is not after " + format_iso8601(*cam.last_seen));
  }

  const Instant now = frame.timestamp();
  const auto readings = extract_all(frame, cam.masks);
  const Seconds coverage = options_.policy.min_model_coverage;

  std::array<Evaluation, kRoiCount> evaluations;
  for (std::size_t i = 0; i < readings.size(); ++i) {
    const RoiState& roi = cam.rois[i];
    std::optional<double> predicted;
    const bool in_horizon = roi.model && now > roi.model->trained_at &&
                            now <= roi.model->trained_at + kPredictionHorizon;
    if (in_horizon) predicted = predict(*roi.model, now, coverage);
    evaluations[i] = evaluate(readings[i], predicted, options_.policy, roi.model.has_value());
  }

  FrameResult result;
  result.table = build_roi_table(frame.camera_id(), now, readings, evaluations, cam.masks.names());
  cam.last_seen = now;

  const FitOptions fit_options{options_.smoothing_alpha, coverage};
  for (std::size_t i = 0; i < readings.size(); ++i) {
    RoiState& roi = cam.rois[i];
    roi.history.push_back({now, readings[i].temperature_c});
    if (!should_retrain(roi.model ? &*roi.model : nullptr, now, !roi.history.empty())) continue;
    const Instant cutoff = now - kTrainingSpan;
    roi.history.erase(roi.history.begin(),
                      std::find_if(roi.history.begin(), roi.history.end(),
                                   [&](const Sample& s) { return s.timestamp > cutoff; }));
    auto model = fit(frame.camera_id(), readings[i].roi_id, roi.history, now,
                     roi.model ? &*roi.model : nullptr, fit_options);
    if (model) {
      roi.model = std::move(model);
      if (on_retrain) on_retrain(*roi.model);
    }
  }

  if (options_.segment) {
    SegmentationReport report = segment_scene(frame, options_.segmentation);
    DeviationResult dev = detect_size_deviation(report.regions, cam.baseline, options_.deviation);
    report.size_deviation_flags = std::move(dev.flags);
    report.disappeared_tracks = std::move(dev.disappeared);
    result.segmentation = std::move(report);
  }
  return result;
}

}  // namespace thermwatch
