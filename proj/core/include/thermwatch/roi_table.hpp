// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "thermwatch/extraction.hpp"
#include "thermwatch/predictor.hpp"

namespace thermwatch {

struct RoiTableRow {
  RoiId roi_id = 0;
  std::string name;
  double recorded_c = 0.0;
  std::optional<double> predicted_c;
  int alarm_bit = 0;
  ModelStatus model_status = ModelStatus::cold_start;

  friend bool operator==(const RoiTableRow&, const RoiTableRow&) = default;
};

/// Per-frame result: recorded and predicted temperature plus the alarm control
/// bit for each of the nine ROIs. rows[i].roi_id == i + 1.
struct RoiTable {
  std::string camera_id;
  Instant timestamp;
  std::array<RoiTableRow, kRoiCount> rows;

  bool any_alarm() const;
  friend bool operator==(const RoiTable&, const RoiTable&) = default;
};

/// Throws TableRejected when an invariant is broken: row ids 1..9 in slot order,
/// alarm_bit in {0,1}, alarm only with status ok, predicted_c present iff status
/// is ok, finite temperatures, non-empty names and a valid camera id.
void validate(const RoiTable& table);

/// Assembles a table from one reading and one evaluation per ROI, in any order.
/// Throws TableRejected on missing/duplicate roi ids or mismatched camera/timestamp.
RoiTable build_roi_table(const std::string& camera_id, Instant timestamp,
                         std::span<const RoiReading> readings,
                         std::span<const Evaluation> evaluations,
                         const std::array<std::string, kRoiCount>& names = default_roi_names());

/// Canonical single-line JSON:
/// {"camera_id":..,"timestamp":"..Z","rows":[{"roi_id":1,"name":..,"recorded_c":..,
///  "predicted_c":<number|null>,"alarm_bit":0|1,"model_status":".."}, x9]}
/// Keys in that order, rows by roi_id, doubles in shortest round-trip form.
std::string to_canonical_json(const RoiTable& table);

/// Strict inverse of to_canonical_json (key order and row order may vary).
/// Throws TableRejected ("bad-json", "missing-field", "unknown-field",
/// "bad-field", "row-count", ...) on anything invalid.
RoiTable parse_roi_table(std::string_view json);

}  // namespace thermwatch
