// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "thermwatch/frame.hpp"

namespace thermwatch {

struct MserParams {
  int delta = 2;                ///< threshold step, in quantisation bins
  double min_area_frac = 0.001;
  double max_area_frac = 0.5;
  double max_variation = 0.25;
  /// A region nested in a more stable one with relative area difference below
  /// this is a duplicate and dropped. 0 keeps every stable region.
  double min_diversity = 0.2;
};

/// A bright maximally stable extremal region: a 4-connected component of
/// {pixels with bin >= level} of the quantised frame.
struct MserRegion {
  int id = 0;      ///< 1-based, ordered by decreasing area
  int parent = 0;  ///< smallest returned region strictly containing this one, 0 if none
  int level = 0;
  long long area = 0;
  double variation = 0.0;  ///< (|R(level - delta)| - |R|) / |R|, lower is more stable
  BoundingBox bbox;
  double centroid_row = 0.0;
  double centroid_col = 0.0;
  double mean_temp_c = 0.0;
  std::vector<std::size_t> pixels;  ///< row-major indices, ascending
};

/// Maximally stable extremal regions (hot-on-cold polarity) of the frame's
/// 8-bit quantisation. Along each chain of the component tree, consecutive
/// admissible regions whose area grows by at most max_variation form one
/// stability run. Runs covering fewer than 2 * delta + 1 threshold levels are
/// dropped; of the rest only the least-varying region is returned, so a smooth
/// blob yields one region rather than a stack of concentric ones.
/// Any two returned regions are disjoint or nested. A constant frame yields no regions.
///
/// Throws InvalidInput unless delta >= 1 and 0 < min_area_frac < max_area_frac <= 1.
std::vector<MserRegion> mser_regions(const ThermalFrame& frame, const MserParams& params = {});

}  // namespace thermwatch
