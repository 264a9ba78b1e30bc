// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermwatch/extraction.hpp"
#include "thermwatch/frame.hpp"
#include "thermwatch/time.hpp"

namespace thermwatch {

inline constexpr Seconds kRetrainInterval = std::chrono::minutes{720};
inline constexpr Seconds kTrainingSpan = std::chrono::hours{24};
inline constexpr Seconds kPredictionHorizon = std::chrono::hours{12};
inline constexpr Seconds kDefaultCoverage = std::chrono::minutes{10};

struct Sample {
  Instant timestamp;
  double temperature_c = 0.0;
  friend bool operator==(const Sample&, const Sample&) = default;
};

struct CurvePoint {
  Seconds time_of_day{0};
  double temperature_c = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Seasonal-persistence model for one (camera, ROI): a time-of-day curve
/// built from the latest 24 h and exponentially blended across retrains.
struct PredictionModel {
  std::string camera_id;
  RoiId roi_id = 0;
  Instant trained_at;
  std::vector<Sample> training_window;  ///< strictly increasing, within (trained_at - 24h, trained_at]
  std::vector<CurvePoint> curve;        ///< sorted by time_of_day, one point per window sample
  double smoothing_alpha = 0.5;
  std::uint64_t version = 0;
};

struct FitOptions {
  double smoothing_alpha = 0.5;
  /// Previous-curve lookups farther than this from any point are not blended.
  Seconds coverage = kDefaultCoverage;
};

/// Fits (or refits) the model at `now` from `history`, of which only samples in
/// (now - 24h, now] are used. New curve value per time of day is
/// alpha * window + (1 - alpha) * previous curve, where the previous curve covers
/// that time of day (exact point or an interpolation gap of at most 2 * coverage);
/// elsewhere the window value is taken as-is. Returns nullopt when the window is empty.
///
/// Throws InvalidInput if history timestamps are not strictly increasing or
/// alpha is outside [0, 1].
std::optional<PredictionModel> fit(const std::string& camera_id, RoiId roi_id,
                                   std::span<const Sample> history, Instant now,
                                   const PredictionModel* previous, const FitOptions& options = {});

/// Curve value at `time_of_day`, linearly interpolated between the neighbouring
/// points (wrapping midnight) when they are at most 2 * coverage apart. Across a
/// wider hole the nearest point is held; nullopt if it is farther than `coverage`.
std::optional<double> curve_value(std::span<const CurvePoint> curve, Seconds time_of_day,
                                  Seconds coverage);

/// Expected temperature at `target`. Throws OutOfHorizon unless
/// trained_at < target <= trained_at + 12h.
std::optional<double> predict(const PredictionModel& model, Instant target, Seconds coverage = kDefaultCoverage);

/// True iff there is no model yet (and data to fit one) or the model is at least 720 min old.
bool should_retrain(const PredictionModel* model, Instant now, bool samples_available = true);

struct AlarmPolicy {
  std::array<double, kRoiCount> threshold_c{15.0, 15.0, 15.0, 15.0, 15.0, 15.0, 15.0, 15.0, 15.0};
  Seconds min_model_coverage = kDefaultCoverage;

  double threshold(RoiId id) const { return threshold_c.at(static_cast<std::size_t>(id - 1)); }
  /// Throws InvalidInput unless every threshold is finite and > 0 and coverage > 0.
  void validate() const;
};

enum class ModelStatus { ok, no_model, cold_start };

const char* to_string(ModelStatus status);
/// Throws ParseError for anything other than "ok", "no_model", "cold_start".
ModelStatus parse_model_status(std::string_view text);

struct Evaluation {
  std::optional<double> predicted_c;
  int alarm_bit = 0;
  ModelStatus model_status = ModelStatus::cold_start;
  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

/// alarm_bit = |recorded - predicted| > threshold when a prediction exists;
/// otherwise 0 with status cold_start (never fitted) or no_model.
Evaluation evaluate(const RoiReading& reading, std::optional<double> predicted,
                    const AlarmPolicy& policy, bool ever_fitted);

}  // namespace thermwatch
