// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "thermwatch/alarm_store.hpp"

namespace thermwatch {

// Wire API:
//   POST /api/v1/roitables   body: canonical RoiTable JSON
//        200 {"accepted":true,"camera_id":..,"timestamp":..}
//        400 {"accepted":false,"reason":<code>,"detail":..}
//        503 {"accepted":false,"reason":"storage","detail":..}   (retryable)
//   GET  /api/v1/alarms?from=&to=&camera_id=&roi_id=&only_alarms=   -> JSON array of tables
//   GET  /api/v1/stats?from=&to=                                     -> stats object
// Empty or absent parameters are unbounded / unfiltered.

/// `[t1,t2,...]` where each element is the table's canonical JSON.
std::string tables_to_json(std::span<const RoiTable> tables);
std::vector<RoiTable> tables_from_json(std::string_view json);

/// {"tables_ingested":n,"alarms_by_roi":{"1":n,..,"9":n},"cameras_reporting":n}
std::string stats_to_json(const AlarmStats& stats);
AlarmStats stats_from_json(std::string_view json);

/// HTTP front end of an AlarmStore.
class AlarmServer {
 public:
  explicit AlarmServer(AlarmStore& store);
  ~AlarmServer();
  AlarmServer(const AlarmServer&) = delete;
  AlarmServer& operator=(const AlarmServer&) = delete;

  /// Binds the listening socket; port 0 picks a free one. Returns the bound port.
  /// Throws std::runtime_error if the address is unavailable.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a successful bind().
  void serve();
  /// serve() on a background thread; returns once the server accepts connections.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

/// The server could not be reached or answered with an unexpected status.
class ServerError : public std::runtime_error {
 public:
  ServerError(const std::string& what, bool unreachable)
      : std::runtime_error(what), unreachable_(unreachable) {}
  bool unreachable() const noexcept { return unreachable_; }

 private:
  bool unreachable_;
};

struct PostOutcome {
  enum class Status { accepted, rejected, unreachable, server_error };
  Status status = Status::unreachable;
  std::string reason;  ///< rejection code or transport error
};

/// Blocking client for the wire API. `base_url` like "http://127.0.0.1:8080";
/// anything without the http:// scheme is rejected with InvalidInput.
class AlarmClient {
 public:
  explicit AlarmClient(const std::string& base_url,
                       std::chrono::milliseconds timeout = std::chrono::seconds{5});
  ~AlarmClient();
  AlarmClient(const AlarmClient&) = delete;
  AlarmClient& operator=(const AlarmClient&) = delete;

  PostOutcome post(const RoiTable& table);
  /// Throws ServerError.
  std::vector<RoiTable> query(const AlarmQuery& q);
  /// Throws ServerError.
  AlarmStats stats(Instant from = Instant::min(), Instant to = Instant::max());

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace thermwatch
