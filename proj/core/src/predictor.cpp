// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "thermwatch/errors.hpp"

namespace thermwatch {

namespace {

constexpr long long kDaySecs = kDay.count();

long long wrap(long long secs) { return ((secs % kDaySecs) + kDaySecs) % kDaySecs; }

// Value at `tod` from the neighbouring points. Interpolates only across gaps of
// at most 2 * coverage; inside a wider hole the nearest point is held when
// `hold` is set, otherwise the time of day counts as uncovered.
std::optional<double> lookup(std::span<const CurvePoint> curve, Seconds time_of_day, Seconds coverage,
                             bool hold) {
  if (curve.empty()) return std::nullopt;
  const long long tod = wrap(time_of_day.count());
  auto it = std::lower_bound(curve.begin(), curve.end(), tod, [](const CurvePoint& p, long long t) {
    return p.time_of_day.count() < t;
  });
  if (it != curve.end() && it->time_of_day.count() == tod) return it->temperature_c;

  const CurvePoint& next = it == curve.end() ? curve.front() : *it;
  const CurvePoint& prev = it == curve.begin() ? curve.back() : *std::prev(it);
  const long long to_prev = wrap(tod - prev.time_of_day.count());
  const long long to_next = wrap(next.time_of_day.count() - tod);
  if (curve.size() > 1 && to_prev + to_next <= 2 * coverage.count()) {
    const double frac = static_cast<double>(to_prev) / static_cast<double>(to_prev + to_next);
    return prev.temperature_c + (next.temperature_c - prev.temperature_c) * frac;
  }
  if (!hold || std::min(to_prev, to_next) > coverage.count()) return std::nullopt;
  return to_prev <= to_next ? prev.temperature_c : next.temperature_c;
}

}  // namespace

std::optional<double> curve_value(std::span<const CurvePoint> curve, Seconds time_of_day,
                                  Seconds coverage) {
  return lookup(curve, time_of_day, coverage, true);
}

std::optional<PredictionModel> fit(const std::string& camera_id, RoiId roi_id,
                                   std::span<const Sample> history, Instant now,
                                   const PredictionModel* previous, const FitOptions& options) {
  if (!(options.smoothing_alpha >= 0.0 && options.smoothing_alpha <= 1.0)) {
    throw InvalidInput("fit: smoothing_alpha must be in [0, 1]");
  }
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (!(history[i - 1].timestamp < history[i].timestamp)) {
      throw InvalidInput("fit: history timestamps must be strictly increasing");
    }
  }
  const Instant window_start = now - kTrainingSpan;
  auto first = std::upper_bound(history.begin(), history.end(), window_start,
                                [](Instant t, const Sample& s) { return t < s.timestamp; });
  auto last = std::upper_bound(history.begin(), history.end(), now,
                               [](Instant t, const Sample& s) { return t < s.timestamp; });
  if (first >= last) return std::nullopt;

  PredictionModel model;
  model.camera_id = camera_id;
  model.roi_id = roi_id;
  model.trained_at = now;
  model.training_window.assign(first, last);
  model.smoothing_alpha = options.smoothing_alpha;
  model.version = previous ? previous->version + 1 : 1;

  model.curve.reserve(model.training_window.size());
  const double alpha = options.smoothing_alpha;
  for (const Sample& s : model.training_window) {
    const Seconds tod = time_of_day(s.timestamp);
    double value = s.temperature_c;
    if (previous) {
      if (auto old = lookup(previous->curve, tod, options.coverage, false)) {
        value = alpha * value + (1.0 - alpha) * *old;
      }
    }
    model.curve.push_back({tod, value});
  }
  // A window shorter than a day never repeats a time of day.
  std::sort(model.curve.begin(), model.curve.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.time_of_day < b.time_of_day; });
  return model;
}

std::optional<double> predict(const PredictionModel& model, Instant target, Seconds coverage) {
  if (!(target > model.trained_at && target <= model.trained_at + kPredictionHorizon)) {
    throw OutOfHorizon("predict: target " + format_iso8601(target) +
                       " outside the 12 h horizon of the model trained at " +
                       format_iso8601(model.trained_at));
  }
  return curve_value(model.curve, time_of_day(target), coverage);
}

bool should_retrain(const PredictionModel* model, Instant now, bool samples_available) {
  if (!model) return samples_available;
  return now - model->trained_at >= kRetrainInterval;
}

void AlarmPolicy::validate() const {
  for (double t : threshold_c) {
    if (!(std::isfinite(t) && t > 0.0)) throw InvalidInput("alarm thresholds must be finite and > 0");
  }
  if (min_model_coverage <= Seconds{0}) throw InvalidInput("min_model_coverage must be > 0");
}

const char* to_string(ModelStatus status) {
  switch (status) {
    case ModelStatus::ok:
      return "ok";
    case ModelStatus::no_model:
      return "no_model";
    case ModelStatus::cold_start:
      return "cold_start";
  }
  return "?";
}

ModelStatus parse_model_status(std::string_view text) {
  if (text == "ok") return ModelStatus::ok;
  if (text == "no_model") return ModelStatus::no_model;
  if (text == "cold_start") return ModelStatus::cold_start;
  throw ParseError("unknown model_status '" + std::string(text) + "'");
}

Evaluation evaluate(const RoiReading& reading, std::optional<double> predicted,
                    const AlarmPolicy& policy, bool ever_fitted) {
  if (!predicted) {
    return {std::nullopt, 0, ever_fitted ? ModelStatus::no_model : ModelStatus::cold_start};
  }
  const double diff = std::abs(reading.temperature_c - *predicted);
  return {predicted, diff > policy.threshold(reading.roi_id) ? 1 : 0, ModelStatus::ok};
}

}  // namespace thermwatch
