// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "oracles.hpp"
#include "tables.hpp"
#include "thermwatch/errors.hpp"
#include "thermwatch/http_api.hpp"

using namespace thermwatch;
using namespace std::chrono_literals;

namespace {

struct Running {
  oracle::TempDir dir;
  AlarmStore store{dir.path() / "alarms.log"};
  AlarmServer server{store};
  int port = server.bind("127.0.0.1", 0);
  Running() { server.start(); }
  ~Running() { server.stop(); }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

RoiTable alarmed(std::mt19937_64& rng, RoiId roi) {
  RoiTable t = synthetic::random_table(rng);
  auto& r = t.rows[static_cast<std::size_t>(roi - 1)];
  r.model_status = ModelStatus::ok;
  r.predicted_c = 20.0;
  r.alarm_bit = 1;
  return t;
}

}  // namespace

TEST_CASE("json helpers round trip") {
  std::mt19937_64 rng(8);
  std::vector<RoiTable> tables;
  for (int i = 0; i < 5; ++i) tables.push_back(synthetic::random_table(rng));
  CHECK(tables_from_json(tables_to_json(tables)) == tables);
  CHECK(tables_to_json({}) == "[]");
  AlarmStats s;
  s.tables_ingested = 7;
  s.cameras_reporting = 2;
  s.alarms_by_roi[4] = 3;
  CHECK(stats_from_json(stats_to_json(s)) == s);
  CHECK_THROWS_AS(tables_from_json("{"), ParseError);
  CHECK_THROWS_AS(stats_from_json("[]"), ParseError);
}

TEST_CASE("server: raw HTTP status codes and bodies") {
  Running srv;
  httplib::Client cli("127.0.0.1", srv.port);
  std::mt19937_64 rng(1);
  const RoiTable t = synthetic::random_table(rng);

  auto ok = cli.Post("/api/v1/roitables", to_canonical_json(t), "application/json");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  const auto body = nlohmann::json::parse(ok->body);
  CHECK(body["accepted"] == true);
  CHECK(body["camera_id"] == t.camera_id);
  CHECK(body["timestamp"] == format_iso8601(t.timestamp));

  const std::string json = to_canonical_json(t);
  const std::string eight = json.substr(0, json.rfind(",{\"roi_id\":9")) + "]}";
  auto bad = cli.Post("/api/v1/roitables", eight, "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  const auto err = nlohmann::json::parse(bad->body);
  CHECK(err["accepted"] == false);
  CHECK(err["reason"] == "row-count");

  auto garbage = cli.Post("/api/v1/roitables", "nope", "application/json");
  REQUIRE(garbage);
  CHECK(garbage->status == 400);
  CHECK(nlohmann::json::parse(garbage->body)["reason"] == "bad-json");

  auto alarms = cli.Get("/api/v1/alarms");
  REQUIRE(alarms);
  CHECK(alarms->status == 200);
  CHECK(alarms->body == "[" + to_canonical_json(t) + "]");

  auto badq = cli.Get("/api/v1/alarms?from=2024-06-02T00:00:00Z&to=2024-06-01T00:00:00Z");
  REQUIRE(badq);
  CHECK(badq->status == 400);
  auto badt = cli.Get("/api/v1/alarms?from=noon");
  REQUIRE(badt);
  CHECK(badt->status == 400);
  auto badroi = cli.Get("/api/v1/alarms?roi_id=11");
  REQUIRE(badroi);
  CHECK(badroi->status == 400);

  auto stats = cli.Get("/api/v1/stats");
  REQUIRE(stats);
  CHECK(stats->status == 200);
  CHECK(stats_from_json(stats->body).tables_ingested == 1);

  auto missing = cli.Get("/api/v1/nothing");
  REQUIRE(missing);
  CHECK(missing->status == 404);
}

TEST_CASE("client: post, query and stats through the server") {
  Running srv;
  AlarmClient client(srv.url());
  std::mt19937_64 rng(2);
  std::vector<RoiTable> sent;
  for (int i = 0; i < 20; ++i) {
    sent.push_back(i % 4 == 0 ? alarmed(rng, 5) : synthetic::random_table(rng));
    const PostOutcome out = client.post(sent.back());
    REQUIRE(out.status == PostOutcome::Status::accepted);
  }
  RoiTable bad = sent[0];
  bad.rows[0].alarm_bit = 1;
  bad.rows[0].model_status = ModelStatus::cold_start;
  bad.rows[0].predicted_c.reset();
  const PostOutcome rej = client.post(bad);
  CHECK(rej.status == PostOutcome::Status::rejected);
  CHECK(rej.reason == "alarm-without-model");

  CHECK(client.query({}) == srv.store.query({}));
  AlarmQuery q;
  q.only_alarms = true;
  q.roi_id = 5;
  const auto fives = client.query(q);
  CHECK(fives == srv.store.query(q));
  CHECK(fives.size() >= 5);
  q.camera_id = sent[4].camera_id;
  q.from = sent[4].timestamp - 1s;
  q.to = sent[4].timestamp;
  const auto narrowed = client.query(q);
  CHECK(narrowed == srv.store.query(q));
  CHECK_FALSE(narrowed.empty());

  CHECK(client.stats() == srv.store.stats());
  const Instant lo = from_unix(1700000000), hi = from_unix(1800000000);
  CHECK(client.stats(lo, hi) == srv.store.stats(lo, hi));
}

TEST_CASE("client: unreachable server") {
  int port = 0;
  {
    Running srv;
    port = srv.port;
  }
  AlarmClient client("http://127.0.0.1:" + std::to_string(port), 500ms);
  std::mt19937_64 rng(3);
  const PostOutcome out = client.post(synthetic::random_table(rng));
  CHECK(out.status == PostOutcome::Status::unreachable);
  try {
    client.query({});
    FAIL("expected ServerError");
  } catch (const ServerError& e) {
    CHECK(e.unreachable());
  }
}

TEST_CASE("client: endpoint must be an http URL") {
  CHECK_THROWS_AS(AlarmClient("not-a-url"), InvalidInput);
  CHECK_THROWS_AS(AlarmClient("127.0.0.1:8080"), InvalidInput);
  CHECK_THROWS_AS(AlarmClient("ftp://127.0.0.1:8080"), InvalidInput);
  CHECK_NOTHROW(AlarmClient("http://127.0.0.1:8080"));
}
