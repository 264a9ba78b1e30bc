// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "thermwatch/roi_table.hpp"

namespace thermwatch {

/// One accepted upload. (camera_id, timestamp) of the table is the logical key.
struct IngestRecord {
  Instant received_at;
  std::string source;  ///< remote endpoint identity, no whitespace
  RoiTable table;

  friend bool operator==(const IngestRecord&, const IngestRecord&) = default;
};

/// `<received_at ISO-8601> <source> <canonical RoiTable JSON>` (no newline).
std::string format_log_line(const IngestRecord& record);
/// Inverse of format_log_line. Throws ParseError.
IngestRecord parse_log_line(std::string_view line);

struct AlarmQuery {
  std::optional<std::string> camera_id;
  Instant from = Instant::min();
  Instant to = Instant::max();  ///< inclusive
  /// With only_alarms, keep tables whose row for this ROI alarms; otherwise no effect on selection.
  std::optional<RoiId> roi_id;
  bool only_alarms = false;

  /// Throws InvalidInput when from > to or roi_id is out of range.
  void validate() const;
  bool matches(const RoiTable& table) const;
};

struct AlarmStats {
  std::size_t tables_ingested = 0;
  std::array<std::size_t, kRoiCount> alarms_by_roi{};  ///< indexed by roi_id - 1
  std::size_t cameras_reporting = 0;

  friend bool operator==(const AlarmStats&, const AlarmStats&) = default;
};

struct IngestAck {
  bool accepted = false;
  std::string camera_id;
  Instant timestamp;
};

/// Append-only store of ingested RoiTables.
///
/// Every ingest is written as one line of the log and flushed to disk before it
/// is acknowledged or becomes visible to queries. Queries see tables deduplicated
/// by key, the latest ingest winning; the log keeps every ingest. Safe for
/// concurrent ingest and query.
class AlarmStore {
 public:
  using Clock = std::function<Instant()>;

  /// Opens (creating if absent) and replays `log_path`. Throws ParseError naming the
  /// first malformed line, or StorageError if the file cannot be opened.
  explicit AlarmStore(std::filesystem::path log_path, Clock clock = {});
  ~AlarmStore();
  AlarmStore(const AlarmStore&) = delete;
  AlarmStore& operator=(const AlarmStore&) = delete;

  /// Throws TableRejected for invalid tables and StorageError when the append fails
  /// (nothing becomes visible in that case).
  IngestAck ingest(const RoiTable& table, const std::string& source);

  /// Deduplicated matches, ordered by timestamp then camera id.
  std::vector<RoiTable> query(const AlarmQuery& q) const;
  AlarmStats stats(Instant from = Instant::min(), Instant to = Instant::max()) const;

  std::size_t log_records() const;
  const std::filesystem::path& log_path() const { return path_; }

 private:
  using Key = std::pair<Instant, std::string>;

  std::filesystem::path path_;
  Clock clock_;
  int fd_ = -1;
  std::mutex append_mu_;
  mutable std::shared_mutex index_mu_;
  std::map<Key, RoiTable> latest_;
  std::size_t records_ = 0;
};

}  // namespace thermwatch
