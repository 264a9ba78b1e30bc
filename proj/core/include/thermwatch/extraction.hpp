// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string>

#include "thermwatch/frame.hpp"

namespace thermwatch {

/// Scalar temperature of one ROI at one instant.
struct RoiReading {
  std::string camera_id;
  Instant timestamp;
  RoiId roi_id = 0;
  double temperature_c = 0.0;  ///< mean of the hottest ceil(5%) of the ROI's pixels
  long long pixel_count = 0;

  friend bool operator==(const RoiReading&, const RoiReading&) = default;
};

/// Number of pixels averaged for an ROI of `n` pixels: ceil(0.05 * n), at least 1.
inline constexpr std::size_t top_fraction_count(std::size_t n) { return n == 0 ? 0 : (n + 19) / 20; }

/// Mean of the hottest top_fraction_count(values.size()) values. `values` must be non-empty.
double top_fraction_mean(std::span<const double> values);

/// Throws InvalidInput when the mask does not match the frame (camera or size)
/// or `roi_id` is outside 1..=9.
RoiReading extract_roi_temperature(const ThermalFrame& frame, const RoiMaskSet& masks, RoiId roi_id);

/// All nine readings, indexed by roi_id - 1.
std::array<RoiReading, kRoiCount> extract_all(const ThermalFrame& frame, const RoiMaskSet& masks);

}  // namespace thermwatch
