// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/roi_table.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "json.hpp"
#include "thermwatch/errors.hpp"

namespace thermwatch {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

bool RoiTable::any_alarm() const {
  return std::any_of(rows.begin(), rows.end(), [](const RoiTableRow& r) { return r.alarm_bit == 1; });
}

void validate(const RoiTable& table) {
  try {
    validate_camera_id(table.camera_id);
  } catch (const InvalidInput& e) {
    throw TableRejected("bad-camera-id", e.what());
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const RoiTableRow& row = table.rows[i];
    const std::string where = "row " + std::to_string(i + 1);
    if (row.roi_id != static_cast<RoiId>(i) + 1) {
      throw TableRejected("bad-roi", where + " carries roi_id " + std::to_string(row.roi_id));
    }
    if (row.name.empty()) throw TableRejected("bad-field", where + " has an empty name");
    if (!std::isfinite(row.recorded_c)) throw TableRejected("bad-field", where + " recorded_c not finite");
    if (row.predicted_c && !std::isfinite(*row.predicted_c)) {
      throw TableRejected("bad-field", where + " predicted_c not finite");
    }
    if (row.alarm_bit != 0 && row.alarm_bit != 1) {
      throw TableRejected("bad-alarm-bit", where + " alarm_bit must be 0 or 1");
    }
    if (row.alarm_bit == 1 && row.model_status != ModelStatus::ok) {
      throw TableRejected("alarm-without-model", where + " raises an alarm without a model");
    }
    if (row.predicted_c.has_value() != (row.model_status == ModelStatus::ok)) {
      throw TableRejected("bad-prediction",
                          where + " predicted_c must be present exactly when model_status is ok");
    }
  }
}

RoiTable build_roi_table(const std::string& camera_id, Instant timestamp,
                         std::span<const RoiReading> readings,
                         std::span<const Evaluation> evaluations,
                         const std::array<std::string, kRoiCount>& names) {
  if (readings.size() != evaluations.size()) {
    throw TableRejected("row-count", "readings and evaluations differ in length");
  }
  if (readings.size() != static_cast<std::size_t>(kRoiCount)) {
    throw TableRejected("row-count", "expected 9 readings, got " + std::to_string(readings.size()));
  }
  RoiTable table;
  table.camera_id = camera_id;
  table.timestamp = timestamp;
  std::array<bool, kRoiCount> seen{};
  for (std::size_t i = 0; i < readings.size(); ++i) {
    const RoiReading& r = readings[i];
    if (!valid_roi(r.roi_id)) throw TableRejected("bad-roi", "roi_id " + std::to_string(r.roi_id));
    const auto slot = static_cast<std::size_t>(r.roi_id - 1);
    if (seen[slot]) throw TableRejected("duplicate-roi", "roi_id " + std::to_string(r.roi_id));
    if (r.camera_id != camera_id || r.timestamp != timestamp) {
      throw TableRejected("mismatched-reading", "reading for roi " + std::to_string(r.roi_id) +
                                                    " belongs to another frame");
    }
    seen[slot] = true;
    const Evaluation& e = evaluations[i];
    table.rows[slot] = {r.roi_id, names[slot], r.temperature_c, e.predicted_c, e.alarm_bit,
                        e.model_status};
  }
  validate(table);
  return table;
}

std::string to_canonical_json(const RoiTable& table) {
  ordered_json rows = ordered_json::array();
  for (const RoiTableRow& row : table.rows) {
    ordered_json r;
    r["roi_id"] = row.roi_id;
    r["name"] = row.name;
    r["recorded_c"] = row.recorded_c;
    r["predicted_c"] = row.predicted_c ? ordered_json(*row.predicted_c) : ordered_json(nullptr);
    r["alarm_bit"] = row.alarm_bit;
    r["model_status"] = to_string(row.model_status);
    rows.push_back(std::move(r));
  }
  ordered_json doc;
  doc["camera_id"] = table.camera_id;
  doc["timestamp"] = format_iso8601(table.timestamp);
  doc["rows"] = std::move(rows);
  try {
    return doc.dump();
  } catch (const nlohmann::json::exception& e) {
    throw TableRejected("bad-field", e.what());
  }
}

namespace {

void require_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) throw TableRejected("bad-field", where + " must be an object");
  for (const char* key : keys) {
    if (!obj.contains(key)) throw TableRejected("missing-field", where + " lacks '" + key + "'");
  }
  for (const auto& item : obj.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; }) ==
        keys.end()) {
      throw TableRejected("unknown-field", where + " has unexpected key '" + item.key() + "'");
    }
  }
}

double number_field(const json& v, const std::string& where) {
  if (!v.is_number()) throw TableRejected("bad-field", where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw TableRejected("bad-field", where + " must be finite");
  return x;
}

long long integer_field(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw TableRejected("bad-field", where + " must be an integer");
  return v.get<long long>();
}

}  // namespace

RoiTable parse_roi_table(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw TableRejected("bad-json", e.what());
  }
  require_keys(doc, {"camera_id", "timestamp", "rows"}, "table");
  if (!doc["camera_id"].is_string()) throw TableRejected("bad-field", "camera_id must be a string");
  if (!doc["timestamp"].is_string()) throw TableRejected("bad-field", "timestamp must be a string");
  if (!doc["rows"].is_array()) throw TableRejected("bad-field", "rows must be an array");

  RoiTable table;
  table.camera_id = doc["camera_id"].get<std::string>();
  try {
    table.timestamp = parse_iso8601(doc["timestamp"].get<std::string>());
  } catch (const ParseError& e) {
    throw TableRejected("bad-timestamp", e.what());
  }
  const json& rows = doc["rows"];
  if (rows.size() != static_cast<std::size_t>(kRoiCount)) {
    throw TableRejected("row-count", "expected 9 rows, got " + std::to_string(rows.size()));
  }
  std::array<bool, kRoiCount> seen{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& r = rows[i];
    const std::string where = "rows[" + std::to_string(i) + "]";
    require_keys(r, {"roi_id", "name", "recorded_c", "predicted_c", "alarm_bit", "model_status"},
                 where);
    const long long id = integer_field(r["roi_id"], where + ".roi_id");
    if (id < 1 || id > kRoiCount) throw TableRejected("bad-roi", where + " roi_id " + std::to_string(id));
    const auto slot = static_cast<std::size_t>(id - 1);
    if (seen[slot]) throw TableRejected("duplicate-roi", "roi_id " + std::to_string(id));
    seen[slot] = true;

    RoiTableRow row;
    row.roi_id = static_cast<RoiId>(id);
    if (!r["name"].is_string()) throw TableRejected("bad-field", where + ".name must be a string");
    row.name = r["name"].get<std::string>();
    row.recorded_c = number_field(r["recorded_c"], where + ".recorded_c");
    if (!r["predicted_c"].is_null()) row.predicted_c = number_field(r["predicted_c"], where + ".predicted_c");
    const long long bit = integer_field(r["alarm_bit"], where + ".alarm_bit");
    if (bit != 0 && bit != 1) throw TableRejected("bad-alarm-bit", where + " alarm_bit must be 0 or 1");
    row.alarm_bit = static_cast<int>(bit);
    if (!r["model_status"].is_string()) {
      throw TableRejected("bad-model-status", where + ".model_status must be a string");
    }
    try {
      row.model_status = parse_model_status(r["model_status"].get<std::string>());
    } catch (const ParseError& e) {
      throw TableRejected("bad-model-status", e.what());
    }
    table.rows[slot] = std::move(row);
  }
  validate(table);
  return table;
}

}  // namespace thermwatch
