// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thermwatch/frame.hpp"
#include "thermwatch/predictor.hpp"
#include "thermwatch/roi_table.hpp"
#include "thermwatch/size_deviation.hpp"

namespace thermwatch {

struct PipelineOptions {
  AlarmPolicy policy;
  double smoothing_alpha = 0.5;
  bool segment = true;  ///< run Otsu/MSER segmentation and size tracking per frame
  SegmentationParams segmentation;
  DeviationParams deviation;
};

struct FrameResult {
  RoiTable table;
  std::optional<SegmentationReport> segmentation;
};

/// Per-frame detection flow for a set of cameras:
/// extract nine readings, predict each from the current model, evaluate the
/// alarm bit, assemble the table, then fold the readings into the history and
/// retrain any model that is due. Evaluating before refitting keeps each
/// reading out of the model that judges it.
///
/// Frames of one camera must arrive in strictly increasing time; cameras are independent.
class DetectionPipeline {
 public:
  /// Throws InvalidInput when the policy is invalid.
  DetectionPipeline(std::map<std::string, RoiMaskSet> masks, PipelineOptions options = {});

  /// Throws InvalidInput for an unknown camera, a mask/frame size mismatch or an
  /// out-of-order frame.
  FrameResult process(const ThermalFrame& frame);

  bool has_camera(const std::string& camera_id) const { return cameras_.count(camera_id) != 0; }
  const PredictionModel* model(const std::string& camera_id, RoiId roi_id) const;

  /// Called after every successful retrain.
  std::function<void(const PredictionModel&)> on_retrain;

 private:
  struct RoiState {
    std::vector<Sample> history;
    std::optional<PredictionModel> model;
  };
  struct CameraState {
    RoiMaskSet masks;
    std::optional<Instant> last_seen;
    std::array<RoiState, kRoiCount> rois;
    SizeBaseline baseline;
  };

  PipelineOptions options_;
  std::map<std::string, CameraState> cameras_;
};

}  // namespace thermwatch
