// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/http_api.hpp"

#include "httplib.h"
#include "json.hpp"
#include "thermwatch/errors.hpp"

namespace thermwatch {

using json = nlohmann::json;

std::string tables_to_json(std::span<const RoiTable> tables) {
  std::string out = "[";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out += ',';
    out += to_canonical_json(tables[i]);
  }
  out += ']';
  return out;
}

std::vector<RoiTable> tables_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("table list: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("table list must be a JSON array");
  std::vector<RoiTable> out;
  out.reserve(doc.size());
  for (const json& item : doc) {
    try {
      out.push_back(parse_roi_table(item.dump()));
    } catch (const TableRejected& e) {
      throw ParseError(std::string("table list: ") + e.what());
    }
  }
  return out;
}

std::string stats_to_json(const AlarmStats& stats) {
  nlohmann::ordered_json by_roi = nlohmann::ordered_json::object();
  for (RoiId id = 1; id <= kRoiCount; ++id) {
    by_roi[std::to_string(id)] = stats.alarms_by_roi[static_cast<std::size_t>(id - 1)];
  }
  nlohmann::ordered_json doc;
  doc["tables_ingested"] = stats.tables_ingested;
  doc["alarms_by_roi"] = std::move(by_roi);
  doc["cameras_reporting"] = stats.cameras_reporting;
  return doc.dump();
}

AlarmStats stats_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text.begin(), text.end());
    AlarmStats s;
    s.tables_ingested = doc.at("tables_ingested").get<std::size_t>();
    s.cameras_reporting = doc.at("cameras_reporting").get<std::size_t>();
    const json& by_roi = doc.at("alarms_by_roi");
    for (RoiId id = 1; id <= kRoiCount; ++id) {
      s.alarms_by_roi[static_cast<std::size_t>(id - 1)] = by_roi.at(std::to_string(id)).get<std::size_t>();
    }
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("stats: ") + e.what());
  }
}

namespace {

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  std::string v = req.get_param_value(name);
  if (v.empty()) return std::nullopt;
  return v;
}

bool parse_flag(const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw InvalidInput("only_alarms must be true/false/1/0");
}

AlarmQuery query_from_request(const httplib::Request& req) {
  AlarmQuery q;
  if (auto v = param(req, "from")) q.from = parse_iso8601(*v);
  if (auto v = param(req, "to")) q.to = parse_iso8601(*v);
  if (auto v = param(req, "camera_id")) q.camera_id = *v;
  if (auto v = param(req, "roi_id")) {
    std::size_t used = 0;
    const int id = std::stoi(*v, &used);
    if (used != v->size()) throw InvalidInput("roi_id must be an integer");
    q.roi_id = id;
  }
  if (auto v = param(req, "only_alarms")) q.only_alarms = parse_flag(*v);
  q.validate();
  return q;
}

void reply_json(httplib::Response& res, int status, const std::string& body) {
  res.status = status;
  res.set_content(body, "application/json");
}

std::string error_body(const std::string& message) {
  json doc;
  doc["error"] = message;
  return doc.dump();
}

}  // namespace

struct AlarmServer::Impl {
  AlarmStore& store;
  httplib::Server server;
  bool bound = false;

  explicit Impl(AlarmStore& s) : store(s) {
    server.Post("/api/v1/roitables", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        const RoiTable table = parse_roi_table(req.body);
        const IngestAck ack = store.ingest(table, req.remote_addr + ":" + std::to_string(req.remote_port));
        body["accepted"] = true;
        body["camera_id"] = ack.camera_id;
        body["timestamp"] = format_iso8601(ack.timestamp);
        reply_json(res, 200, body.dump());
      } catch (const TableRejected& e) {
        body["accepted"] = false;
        body["reason"] = e.reason();
        body["detail"] = e.what();
        reply_json(res, 400, body.dump());
      } catch (const StorageError& e) {
        body["accepted"] = false;
        body["reason"] = "storage";
        body["detail"] = e.what();
        reply_json(res, 503, body.dump());
      }
    });
    server.Get("/api/v1/alarms", [this](const httplib::Request& req, httplib::Response& res) {
      AlarmQuery q;
      try {
        q = query_from_request(req);
      } catch (const std::exception& e) {
        reply_json(res, 400, error_body(e.what()));
        return;
      }
      reply_json(res, 200, tables_to_json(store.query(q)));
    });
    server.Get("/api/v1/stats", [this](const httplib::Request& req, httplib::Response& res) {
      Instant from = Instant::min();
      Instant to = Instant::max();
      try {
        if (auto v = param(req, "from")) from = parse_iso8601(*v);
        if (auto v = param(req, "to")) to = parse_iso8601(*v);
        reply_json(res, 200, stats_to_json(store.stats(from, to)));
      } catch (const std::exception& e) {
        reply_json(res, 400, error_body(e.what()));
      }
    });
  }
};

AlarmServer::AlarmServer(AlarmStore& store) : impl_(std::make_unique<Impl>(store)) {}

AlarmServer::~AlarmServer() { stop(); }

int AlarmServer::bind(const std::string& host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
    if (bound_port < 0) throw std::runtime_error("cannot bind " + host + ":<any>");
  } else if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound_port;
}

void AlarmServer::serve() {
  if (!impl_->bound) throw std::logic_error("AlarmServer::serve before bind");
  impl_->server.listen_after_bind();
}

void AlarmServer::start() {
  if (!impl_->bound) throw std::logic_error("AlarmServer::start before bind");
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void AlarmServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

struct AlarmClient::Impl {
  httplib::Client client;
  explicit Impl(const std::string& url) : client(url) {}
};

AlarmClient::AlarmClient(const std::string& base_url, std::chrono::milliseconds timeout)
    : impl_(base_url.rfind("http://", 0) == 0 ? std::make_unique<Impl>(base_url) : nullptr) {
  if (!impl_ || !impl_->client.is_valid()) throw InvalidInput("invalid server endpoint '" + base_url + "'");
  impl_->client.set_connection_timeout(timeout);
  impl_->client.set_read_timeout(timeout);
  impl_->client.set_write_timeout(timeout);
  impl_->client.set_keep_alive(true);
}

AlarmClient::~AlarmClient() = default;

PostOutcome AlarmClient::post(const RoiTable& table) {
  auto res = impl_->client.Post("/api/v1/roitables", to_canonical_json(table), "application/json");
  if (!res) return {PostOutcome::Status::unreachable, httplib::to_string(res.error())};
  if (res->status == 200) return {PostOutcome::Status::accepted, {}};
  std::string reason = "http " + std::to_string(res->status);
  try {
    const json body = json::parse(res->body);
    if (body.contains("reason")) reason = body["reason"].get<std::string>();
  } catch (const json::exception&) {
  }
  if (res->status == 400) return {PostOutcome::Status::rejected, reason};
  return {PostOutcome::Status::server_error, reason};
}

namespace {

template <typename Result>
const httplib::Response& checked(const Result& res, const char* what) {
  if (!res) throw ServerError(std::string(what) + ": " + httplib::to_string(res.error()), true);
  if (res->status != 200) {
    std::string detail = res->body;
    try {
      detail = json::parse(res->body).at("error").template get<std::string>();
    } catch (const json::exception&) {
    }
    throw ServerError(std::string(what) + ": http " + std::to_string(res->status) + ": " + detail, false);
  }
  return *res;
}

}  // namespace

std::vector<RoiTable> AlarmClient::query(const AlarmQuery& q) {
  q.validate();
  httplib::Params params;
  if (q.from != Instant::min()) params.emplace("from", format_iso8601(q.from));
  if (q.to != Instant::max()) params.emplace("to", format_iso8601(q.to));
  if (q.camera_id) params.emplace("camera_id", *q.camera_id);
  if (q.roi_id) params.emplace("roi_id", std::to_string(*q.roi_id));
  if (q.only_alarms) params.emplace("only_alarms", "true");
  const auto result = impl_->client.Get("/api/v1/alarms", params, httplib::Headers{});
  return tables_from_json(checked(result, "query").body);
}

AlarmStats AlarmClient::stats(Instant from, Instant to) {
  httplib::Params params;
  if (from != Instant::min()) params.emplace("from", format_iso8601(from));
  if (to != Instant::max()) params.emplace("to", format_iso8601(to));
  const auto result = impl_->client.Get("/api/v1/stats", params, httplib::Headers{});
  return stats_from_json(checked(result, "stats").body);
}

}  // namespace thermwatch
