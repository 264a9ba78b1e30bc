// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/frame.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "thermwatch/errors.hpp"

namespace thermwatch {

void validate_camera_id(const std::string& id) {
  if (id.empty()) throw InvalidInput("camera_id must not be empty");
  const bool bad = std::any_of(id.begin(), id.end(), [](unsigned char ch) {
    return std::isspace(ch) || std::iscntrl(ch) || ch == '/' || ch == '\\';
  });
  if (bad) throw InvalidInput("camera_id '" + id + "' contains whitespace, control or path characters");
}

void BoundingBox::extend(int row, int col) {
  if (empty()) {
    *this = {row, col, row, col};
    return;
  }
  row_min = std::min(row_min, row);
  col_min = std::min(col_min, col);
  row_max = std::max(row_max, row);
  col_max = std::max(col_max, col);
}

long long overlap_area(const BoundingBox& a, const BoundingBox& b) {
  if (a.empty() || b.empty()) return 0;
  const BoundingBox both{std::max(a.row_min, b.row_min), std::max(a.col_min, b.col_min),
                         std::min(a.row_max, b.row_max), std::min(a.col_max, b.col_max)};
  return both.area();
}

ThermalFrame::ThermalFrame(std::string camera_id, Instant timestamp, int rows, int cols,
                           std::vector<double> pixels)
    : camera_id_(std::move(camera_id)),
      timestamp_(timestamp),
      rows_(rows),
      cols_(cols),
      pixels_(std::move(pixels)) {
  validate_camera_id(camera_id_);
  if (rows_ < 1 || cols_ < 1) throw InvalidInput("frame dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_)) {
    throw InvalidInput("frame pixel count does not match rows x cols");
  }
  if (!std::all_of(pixels_.begin(), pixels_.end(), [](double v) { return std::isfinite(v); })) {
    throw InvalidInput("frame contains a non-finite temperature");
  }
}

const std::array<std::string, kRoiCount>& default_roi_names() {
  static const std::array<std::string, kRoiCount> names = {
      "primary_terminal_1", "primary_terminal_2", "secondary_terminal_1",
      "secondary_terminal_2", "hv_bushing_1",      "hv_bushing_2",
      "lv_bushing",           "transformer_body",  "background",
  };
  return names;
}

RoiMaskSet::RoiMaskSet(std::string camera_id, int rows, int cols,
                       std::vector<std::uint8_t> labels,
                       std::array<std::string, kRoiCount> names)
    : camera_id_(std::move(camera_id)),
      rows_(rows),
      cols_(cols),
      labels_(std::move(labels)),
      names_(std::move(names)) {
  validate_camera_id(camera_id_);
  if (rows_ < 1 || cols_ < 1) throw InvalidInput("mask dimensions must be positive");
  if (labels_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_)) {
    throw InvalidInput("mask label count does not match rows x cols");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int label = labels_[i];
    if (label > kRoiCount) throw InvalidInput("mask label out of range 0..9");
    if (label > 0) members_[static_cast<std::size_t>(label - 1)].push_back(i);
  }
  for (RoiId id = 1; id <= kRoiCount; ++id) {
    if (members_[static_cast<std::size_t>(id - 1)].empty()) {
      throw InvalidInput("mask for camera '" + camera_id_ + "' has no pixels for ROI " +
                         std::to_string(id));
    }
    if (names_[static_cast<std::size_t>(id - 1)].empty()) {
      throw InvalidInput("ROI " + std::to_string(id) + " has an empty name");
    }
  }
}

std::span<const std::size_t> RoiMaskSet::pixels_of(RoiId id) const {
  if (!valid_roi(id)) throw InvalidInput("roi_id out of range 1..9");
  return members_[static_cast<std::size_t>(id - 1)];
}

}  // namespace thermwatch
