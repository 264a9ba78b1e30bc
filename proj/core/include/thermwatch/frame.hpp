// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "thermwatch/time.hpp"

namespace thermwatch {

/// Number of regions of interest in every camera scene.
inline constexpr int kRoiCount = 9;

/// ROI identifier in 1..=kRoiCount.
using RoiId = int;

inline constexpr bool valid_roi(RoiId id) { return id >= 1 && id <= kRoiCount; }

/// Throws InvalidInput unless `id` is non-empty and free of whitespace and path separators.
void validate_camera_id(const std::string& id);

/// Rectangle in pixel coordinates, inclusive on both ends.
struct BoundingBox {
  int row_min = 0;
  int col_min = 0;
  int row_max = -1;
  int col_max = -1;

  bool empty() const { return row_max < row_min || col_max < col_min; }
  long long area() const {
    return empty() ? 0 : static_cast<long long>(row_max - row_min + 1) * (col_max - col_min + 1);
  }
  void extend(int row, int col);
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Area of the intersection of two boxes (0 when disjoint).
long long overlap_area(const BoundingBox& a, const BoundingBox& b);

/// Timestamped row-major grid of temperatures in degrees Celsius from one camera.
class ThermalFrame {
 public:
  /// Throws InvalidInput on empty dimensions, size mismatch or non-finite pixels.
  ThermalFrame(std::string camera_id, Instant timestamp, int rows, int cols,
               std::vector<double> pixels);

  const std::string& camera_id() const { return camera_id_; }
  Instant timestamp() const { return timestamp_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return pixels_.size(); }
  std::span<const double> pixels() const { return pixels_; }
  double at(int row, int col) const { return pixels_[static_cast<std::size_t>(row) * cols_ + col]; }

  friend bool operator==(const ThermalFrame&, const ThermalFrame&) = default;

 private:
  std::string camera_id_;
  Instant timestamp_;
  int rows_;
  int cols_;
  std::vector<double> pixels_;
};

/// Human-readable defaults for ROI 1..9.
const std::array<std::string, kRoiCount>& default_roi_names();

/// Per-camera labeling of pixels into the nine ROIs (0 = unassigned).
class RoiMaskSet {
 public:
  /// Throws InvalidInput unless every label is in 0..=9 and each ROI 1..=9 owns a pixel.
  RoiMaskSet(std::string camera_id, int rows, int cols, std::vector<std::uint8_t> labels,
             std::array<std::string, kRoiCount> names = default_roi_names());

  const std::string& camera_id() const { return camera_id_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::span<const std::uint8_t> labels() const { return labels_; }
  const std::string& name(RoiId id) const { return names_.at(static_cast<std::size_t>(id - 1)); }
  const std::array<std::string, kRoiCount>& names() const { return names_; }

  /// Row-major pixel indices belonging to `id`, ascending.
  std::span<const std::size_t> pixels_of(RoiId id) const;

  bool matches(const ThermalFrame& frame) const {
    return frame.rows() == rows_ && frame.cols() == cols_;
  }

  friend bool operator==(const RoiMaskSet& a, const RoiMaskSet& b) {
    return a.camera_id_ == b.camera_id_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.labels_ == b.labels_ && a.names_ == b.names_;
  }

 private:
  std::string camera_id_;
  int rows_;
  int cols_;
  std::vector<std::uint8_t> labels_;
  std::array<std::string, kRoiCount> names_;
  std::array<std::vector<std::size_t>, kRoiCount> members_;
};

}  // namespace thermwatch
