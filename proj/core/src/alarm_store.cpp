// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/alarm_store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>

#include "thermwatch/errors.hpp"

namespace thermwatch {

namespace {

std::string sanitize_source(const std::string& source) {
  std::string out = source.empty() ? "unknown" : source;
  for (char& ch : out) {
    if (std::isspace(static_cast<unsigned char>(ch)) || std::iscntrl(static_cast<unsigned char>(ch))) ch = '_';
  }
  return out;
}

// Best effort: drop a partially written record so replay never sees it.
void rollback(int fd, off_t size) {
  if (::ftruncate(fd, size) != 0) {
    // Nothing more to do; the next replay will report the torn line.
  }
}

Instant system_now() {
  return std::chrono::time_point_cast<Seconds>(std::chrono::system_clock::now());
}

}  // namespace

std::string format_log_line(const IngestRecord& record) {
  return format_iso8601(record.received_at) + ' ' + sanitize_source(record.source) + ' ' +
         to_canonical_json(record.table);
}

IngestRecord parse_log_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto first = line.find(' ');
  const auto second = first == std::string_view::npos ? first : line.find(' ', first + 1);
  if (second == std::string_view::npos) throw ParseError("expected '<received_at> <source> <json>'");
  IngestRecord rec;
  rec.received_at = parse_iso8601(line.substr(0, first));
  rec.source = std::string(line.substr(first + 1, second - first - 1));
  if (rec.source.empty()) throw ParseError("empty source field");
  try {
    rec.table = parse_roi_table(line.substr(second + 1));
  } catch (const TableRejected& e) {
    throw ParseError(std::string("invalid table: ") + e.what());
  }
  return rec;
}

void AlarmQuery::validate() const {
  if (from > to) throw InvalidInput("query range: from is after to");
  if (roi_id && !valid_roi(*roi_id)) throw InvalidInput("query roi_id must be in 1..9");
}

bool AlarmQuery::matches(const RoiTable& table) const {
  if (table.timestamp < from || table.timestamp > to) return false;
  if (camera_id && table.camera_id != *camera_id) return false;
  if (only_alarms) {
    if (roi_id) return table.rows[static_cast<std::size_t>(*roi_id - 1)].alarm_bit == 1;
    return table.any_alarm();
  }
  return true;
}

AlarmStore::AlarmStore(std::filesystem::path log_path, Clock clock)
    : path_(std::move(log_path)), clock_(clock ? std::move(clock) : Clock(system_now)) {
  {
    std::ifstream in(path_, std::ios::binary);
    if (in) {
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        IngestRecord rec;
        try {
          rec = parse_log_line(line);
        } catch (const std::exception& e) {
          throw ParseError(path_.string() + ": " + e.what(), line_no);
        }
        Key key{rec.table.timestamp, rec.table.camera_id};
        latest_.insert_or_assign(std::move(key), std::move(rec.table));
        ++records_;
      }
    } else if (std::filesystem::exists(path_)) {
      throw StorageError("cannot read log '" + path_.string() + "'");
    }
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw StorageError("cannot open log '" + path_.string() + "': " + std::strerror(errno));
  }
}

AlarmStore::~AlarmStore() {
  if (fd_ >= 0) ::close(fd_);
}

IngestAck AlarmStore::ingest(const RoiTable& table, const std::string& source) {
  validate(table);
  IngestRecord record{clock_(), sanitize_source(source), table};
  const std::string line = format_log_line(record) + '\n';

  std::lock_guard append_lock(append_mu_);
  struct stat st {};
  if (::fstat(fd_, &st) != 0) throw StorageError(std::string("fstat: ") + std::strerror(errno));
  const off_t before = st.st_size;

  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      const std::string err = std::strerror(errno);
      rollback(fd_, before);
      throw StorageError("append to '" + path_.string() + "' failed: " + err);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0) {
    const std::string err = std::strerror(errno);
    rollback(fd_, before);
    throw StorageError("flush of '" + path_.string() + "' failed: " + err);
  }

  {
    std::unique_lock index_lock(index_mu_);
    latest_.insert_or_assign(Key{table.timestamp, table.camera_id}, table);
    ++records_;
  }
  return {true, table.camera_id, table.timestamp};
}

std::vector<RoiTable> AlarmStore::query(const AlarmQuery& q) const {
  q.validate();
  std::shared_lock lock(index_mu_);
  std::vector<RoiTable> out;
  auto it = latest_.lower_bound(Key{q.from, std::string{}});
  for (; it != latest_.end() && it->first.first <= q.to; ++it) {
    if (q.matches(it->second)) out.push_back(it->second);
  }
  return out;
}

AlarmStats AlarmStore::stats(Instant from, Instant to) const {
  AlarmQuery q;
  q.from = from;
  q.to = to;
  q.validate();
  std::shared_lock lock(index_mu_);
  AlarmStats s;
  std::set<std::string> cameras;
  auto it = latest_.lower_bound(Key{from, std::string{}});
  for (; it != latest_.end() && it->first.first <= to; ++it) {
    ++s.tables_ingested;
    cameras.insert(it->second.camera_id);
    for (const RoiTableRow& row : it->second.rows) {
      if (row.alarm_bit == 1) ++s.alarms_by_roi[static_cast<std::size_t>(row.roi_id - 1)];
    }
  }
  s.cameras_reporting = cameras.size();
  return s;
}

std::size_t AlarmStore::log_records() const {
  std::shared_lock lock(index_mu_);
  return records_;
}

}  // namespace thermwatch
