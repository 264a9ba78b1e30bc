// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "thermwatch/frame.hpp"

namespace thermwatch {

inline constexpr int kHistogramBins = 256;

using Histogram = std::array<std::uint64_t, kHistogramBins>;

/// 8-bit view of a frame: [frame_min, frame_max] mapped linearly onto bins 0..255.
/// A constant frame maps every pixel to bin 0.
struct Quantized {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint8_t> bins;

  /// Temperature at the upper edge of `bin`: pixels in bins > `bin` are strictly hotter.
  double upper_edge_c(int bin) const;
};

Quantized quantize(const ThermalFrame& frame);
Histogram histogram_of(std::span<const std::uint8_t> bins);

/// Otsu's threshold: the bin t maximising the between-class variance of
/// {bins <= t} versus {bins > t}. Candidates start at the lowest occupied bin
/// and the smallest maximiser wins, so a single occupied bin returns itself.
/// The comparison is exact (integer arithmetic), hence ties are genuine ties.
///
/// Throws InvalidInput when every count is zero or the total exceeds 2^28.
int otsu_threshold(const Histogram& histogram);

/// A 4-connected component of a binary image.
struct Component {
  int id = 0;  ///< 1-based, in raster order of each component's first pixel
  long long area = 0;
  BoundingBox bbox;
  double mean_temp_c = 0.0;
  double centroid_row = 0.0;
  double centroid_col = 0.0;
};

struct ComponentLabeling {
  int rows = 0;
  int cols = 0;
  std::vector<int> labels;  ///< 0 = background, otherwise Component::id
  std::vector<Component> components;
};

/// 4-connected components of `foreground` (row-major, rows x cols).
/// Temperatures come from `frame` for the mean.
ComponentLabeling label_components(const ThermalFrame& frame, std::span<const bool> foreground);

struct OtsuSegmentation {
  int threshold_bin = 0;
  double threshold_c = 0.0;
  ComponentLabeling foreground;
};

/// Quantise, threshold with Otsu, and label the above-threshold pixels.
OtsuSegmentation segment_otsu(const ThermalFrame& frame);

}  // namespace thermwatch
