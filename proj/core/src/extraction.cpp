// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/extraction.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "thermwatch/errors.hpp"

namespace thermwatch {

double top_fraction_mean(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("top_fraction_mean: no values");
  const std::size_t k = top_fraction_count(values.size());
  std::vector<double> scratch(values.begin(), values.end());
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   scratch.end(), std::greater<>());
  // The k hottest now occupy [0, k); sort them so the sum is order-independent.
  std::sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += scratch[i];
  const double mean = sum / static_cast<double>(k);
  // Rounding can nudge the mean of identical values past them.
  return std::clamp(mean, scratch[k - 1], scratch[0]);
}

RoiReading extract_roi_temperature(const ThermalFrame& frame, const RoiMaskSet& masks,
                                   RoiId roi_id) {
  if (!valid_roi(roi_id)) throw InvalidInput("roi_id out of range 1..9");
  if (!masks.matches(frame)) {
    throw InvalidInput("mask " + std::to_string(masks.rows()) + "x" + std::to_string(masks.cols()) +
                       " does not match frame " + std::to_string(frame.rows()) + "x" +
                       std::to_string(frame.cols()));
  }
  if (masks.camera_id() != frame.camera_id()) {
    throw InvalidInput("mask camera '" + masks.camera_id() + "' does not match frame camera '" +
                       frame.camera_id() + "'");
  }
  const auto members = masks.pixels_of(roi_id);
  const auto px = frame.pixels();
  std::vector<double> values;
  values.reserve(members.size());
  for (std::size_t idx : members) values.push_back(px[idx]);

  RoiReading reading;
  reading.camera_id = frame.camera_id();
  reading.timestamp = frame.timestamp();
  reading.roi_id = roi_id;
  reading.temperature_c = top_fraction_mean(values);
  reading.pixel_count = static_cast<long long>(members.size());
  return reading;
}

std::array<RoiReading, kRoiCount> extract_all(const ThermalFrame& frame, const RoiMaskSet& masks) {
  std::array<RoiReading, kRoiCount> out;
  for (RoiId id = 1; id <= kRoiCount; ++id) {
    out[static_cast<std::size_t>(id - 1)] = extract_roi_temperature(frame, masks, id);
  }
  return out;
}

}  // namespace thermwatch
