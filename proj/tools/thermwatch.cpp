// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

// thermwatch: simulate a camera fleet, run detection, serve and query alarms.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "thermwatch/errors.hpp"
#include "thermwatch/frame_io.hpp"
#include "thermwatch/http_api.hpp"
#include "thermwatch/pipeline.hpp"
#include "thermwatch/scenario.hpp"
#include "thermwatch/simulation.hpp"

namespace fs = std::filesystem;
using namespace thermwatch;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kPartialDelivery = 3,
  kServerError = 4,
};

// Configuration or input problem detected before or during a run.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kManifest = "manifest.txt";

std::string compact_stamp(Instant t) {
  std::string s = format_iso8601(t);
  std::erase(s, '-');
  std::erase(s, ':');
  return s;
}

Instant parse_time_arg(const std::string& text, const char* flag) {
  try {
    return parse_iso8601(text);
  } catch (const ParseError& e) {
    throw ConfigError(std::string(flag) + ": " + e.what());
  }
}

Scenario load_scenario_arg(const std::string& path, std::optional<double> span_hours) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  if (span_hours) {
    if (*span_hours < 0) throw ConfigError("--span-hours must be >= 0");
    sc.span = Seconds{static_cast<long long>(std::llround(*span_hours * 3600.0))};
  }
  return sc;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scenario;
  std::optional<double> span_hours;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  const Scenario sc = load_scenario_arg(args.scenario, args.span_hours);
  const fs::path out(args.out);
  fs::create_directories(out / "masks");
  for (const CameraConfig& cam : sc.cameras) {
    write_mask_file(out / "masks" / (cam.camera_id + ".tmask"), scene_mask(cam.camera_id, cam.scene));
  }

  std::map<std::string, const CameraConfig*> by_id;
  for (const CameraConfig& cam : sc.cameras) by_id[cam.camera_id] = &cam;

  std::ofstream manifest(out / kManifest, std::ios::trunc);
  if (!manifest) throw ConfigError("cannot write " + (out / kManifest).string());
  std::size_t frames = 0;
  for (const Capture& cap : next_capture_times(sc.cameras, sc.start, sc.start + sc.span)) {
    const ThermalFrame frame = simulate_frame(*by_id.at(cap.camera_id), sc.script, cap.time);
    const fs::path rel = fs::path("frames") / cap.camera_id / (compact_stamp(cap.time) + ".tframe");
    fs::create_directories((out / rel).parent_path());
    write_frame_file(out / rel, frame);
    manifest << cap.camera_id << ' ' << format_iso8601(cap.time) << ' ' << rel.generic_string() << '\n';
    ++frames;
  }
  manifest.flush();
  if (!manifest) throw std::runtime_error("failed writing the manifest");
  std::cout << "simulated " << frames << " frames from " << sc.cameras.size() << " cameras into "
            << out.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
  std::string frames;
  std::string scenario;
  std::optional<double> span_hours;
  std::string masks;
  std::string server;
  std::string out;
  double threshold = 15.0;
  std::vector<std::string> threshold_roi;
  double alpha = 0.5;
  bool no_segmentation = false;
};

struct ManifestEntry {
  std::string camera_id;
  Instant timestamp;
  fs::path path;
};

std::vector<ManifestEntry> read_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifest);
  if (!in) throw ConfigError("no " + std::string(kManifest) + " in " + dir.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cam, ts, rel, extra;
    if (!(fields >> cam >> ts >> rel) || (fields >> extra)) {
      throw ConfigError(std::string(kManifest) + " line " + std::to_string(line_no) +
                        ": expected '<camera_id> <timestamp> <path>'");
    }
    try {
      entries.push_back({cam, parse_iso8601(ts), dir / rel});
    } catch (const ParseError& e) {
      throw ConfigError(std::string(kManifest) + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return entries;
}

std::map<std::string, RoiMaskSet> read_masks(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("mask directory " + dir.string() + " does not exist");
  std::map<std::string, RoiMaskSet> masks;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".tmask") continue;
    try {
      RoiMaskSet m = read_mask_file(entry.path());
      const std::string id = m.camera_id();
      masks.emplace(id, std::move(m));
    } catch (const ParseError& e) {
      throw ConfigError(entry.path().string() + ": " + e.what());
    }
  }
  return masks;
}

AlarmPolicy policy_from(const DetectArgs& args) {
  AlarmPolicy policy;
  policy.threshold_c.fill(args.threshold);
  for (const std::string& spec : args.threshold_roi) {
    const auto eq = spec.find('=');
    int id = 0;
    double value = 0.0;
    try {
      if (eq == std::string::npos) throw std::invalid_argument(spec);
      std::size_t used = 0;
      id = std::stoi(spec.substr(0, eq), &used);
      if (used != eq) throw std::invalid_argument(spec);
      const std::string v = spec.substr(eq + 1);
      value = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
      throw ConfigError("--threshold-roi expects <roi_id>=<degrees C>, got '" + spec + "'");
    }
    if (!valid_roi(id)) throw ConfigError("--threshold-roi: roi id must be in 1..9");
    policy.threshold_c[static_cast<std::size_t>(id - 1)] = value;
  }
  try {
    policy.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return policy;
}

nlohmann::ordered_json segmentation_json(const SegmentationReport& rep) {
  nlohmann::ordered_json doc;
  doc["camera_id"] = rep.camera_id;
  doc["timestamp"] = format_iso8601(rep.timestamp);
  doc["otsu_threshold_c"] = rep.otsu_threshold_c;
  auto regions = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rep.regions.size(); ++i) {
    const SceneRegion& r = rep.regions[i];
    nlohmann::ordered_json j;
    j["region_id"] = r.region_id;
    j["pixel_area"] = r.pixel_area;
    j["bbox"] = {r.bbox.row_min, r.bbox.col_min, r.bbox.row_max, r.bbox.col_max};
    j["mean_temp_c"] = r.mean_temp_c;
    j["size_deviation"] = i < rep.size_deviation_flags.size() && rep.size_deviation_flags[i];
    regions.push_back(std::move(j));
  }
  doc["regions"] = std::move(regions);
  doc["disappeared_tracks"] = rep.disappeared_tracks;
  auto mser = nlohmann::ordered_json::array();
  for (const MserRegion& m : rep.mser) {
    nlohmann::ordered_json j;
    j["id"] = m.id;
    j["parent"] = m.parent;
    j["level"] = m.level;
    j["area"] = m.area;
    j["centroid"] = {m.centroid_row, m.centroid_col};
    j["mean_temp_c"] = m.mean_temp_c;
    mser.push_back(std::move(j));
  }
  doc["mser"] = std::move(mser);
  return doc;
}

// Pushes tables to the server; after the first transport failure everything
// else goes straight to the spool.
class Delivery {
 public:
  Delivery(const std::string& server, const fs::path& spool_path) : spool_path_(spool_path) {
    if (server.empty()) return;
    try {
      client_.emplace(server);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
  }

  void send(const RoiTable& table) {
    if (!client_) return;
    if (!down_) {
      const PostOutcome out = client_->post(table);
      switch (out.status) {
        case PostOutcome::Status::accepted:
          ++delivered_;
          return;
        case PostOutcome::Status::rejected:
        case PostOutcome::Status::server_error:
          ++server_errors_;
          std::cerr << "thermwatch: server refused " << table.camera_id << ' '
                    << format_iso8601(table.timestamp) << ": " << out.reason << '\n';
          spool(table);
          return;
        case PostOutcome::Status::unreachable:
          down_ = true;
          std::cerr << "thermwatch: server unreachable (" << out.reason << "); spooling to "
                    << spool_path_.string() << '\n';
          break;
      }
    }
    spool(table);
  }

  std::size_t delivered() const { return delivered_; }
  std::size_t spooled() const { return spooled_; }
  bool unreachable() const { return down_; }
  std::size_t server_errors() const { return server_errors_; }

 private:
  void spool(const RoiTable& table) {
    if (!spool_.is_open()) spool_.open(spool_path_, std::ios::app);
    spool_ << to_canonical_json(table) << '\n';
    spool_.flush();
    if (!spool_) throw std::runtime_error("cannot write spool " + spool_path_.string());
    ++spooled_;
  }

  fs::path spool_path_;
  std::optional<AlarmClient> client_;
  std::ofstream spool_;
  bool down_ = false;
  std::size_t delivered_ = 0;
  std::size_t spooled_ = 0;
  std::size_t server_errors_ = 0;
};

int run_detect(const DetectArgs& args) {
  if (args.frames.empty() == args.scenario.empty()) {
    throw ConfigError("detect needs exactly one of --frames or --scenario");
  }
  PipelineOptions options;
  options.policy = policy_from(args);
  if (!(args.alpha >= 0.0 && args.alpha <= 1.0)) throw ConfigError("--alpha must be in [0, 1]");
  options.smoothing_alpha = args.alpha;
  options.segment = !args.no_segmentation;

  // Work list: frames are loaded lazily in the order given.
  std::map<std::string, RoiMaskSet> masks;
  std::vector<ManifestEntry> manifest;
  std::optional<Scenario> scenario;
  std::vector<Capture> captures;
  if (!args.frames.empty()) {
    manifest = read_manifest(args.frames);
    masks = read_masks(args.masks.empty() ? fs::path(args.frames) / "masks" : fs::path(args.masks));
    for (const ManifestEntry& e : manifest) {
      if (!masks.count(e.camera_id)) throw ConfigError("no mask for camera '" + e.camera_id + "'");
    }
  } else {
    scenario = load_scenario_arg(args.scenario, args.span_hours);
    if (!args.masks.empty()) masks = read_masks(args.masks);
    for (const CameraConfig& cam : scenario->cameras) {
      if (args.masks.empty()) masks.emplace(cam.camera_id, scene_mask(cam.camera_id, cam.scene));
      if (!masks.count(cam.camera_id)) throw ConfigError("no mask for camera '" + cam.camera_id + "'");
    }
    captures = next_capture_times(scenario->cameras, scenario->start, scenario->start + scenario->span);
  }

  DetectionPipeline pipeline(std::move(masks), options);
  const fs::path out(args.out);
  fs::create_directories(out);
  std::ofstream tables(out / "roitables.ndjson", std::ios::trunc);
  std::ofstream segments;
  if (options.segment) segments.open(out / "segmentation.ndjson", std::ios::trunc);
  fs::remove(out / "spool.ndjson");
  Delivery delivery(args.server, out / "spool.ndjson");

  std::size_t frames = 0;
  std::size_t alarm_rows = 0;
  std::size_t flagged = 0;
  auto handle = [&](const ThermalFrame& frame) {
    FrameResult r;
    try {
      r = pipeline.process(frame);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    tables << to_canonical_json(r.table) << '\n';
    for (const RoiTableRow& row : r.table.rows) alarm_rows += static_cast<std::size_t>(row.alarm_bit);
    if (r.segmentation) {
      segments << segmentation_json(*r.segmentation).dump() << '\n';
      const auto& f = r.segmentation->size_deviation_flags;
      if (std::find(f.begin(), f.end(), true) != f.end() || !r.segmentation->disappeared_tracks.empty()) {
        ++flagged;
      }
    }
    delivery.send(r.table);
    ++frames;
  };

  if (scenario) {
    std::map<std::string, const CameraConfig*> by_id;
    for (const CameraConfig& cam : scenario->cameras) by_id[cam.camera_id] = &cam;
    for (const Capture& cap : captures) handle(simulate_frame(*by_id.at(cap.camera_id), scenario->script, cap.time));
  } else {
    for (const ManifestEntry& e : manifest) {
      ThermalFrame frame = [&] {
        try {
          return read_frame_file(e.path);
        } catch (const ParseError& err) {
          throw ConfigError(e.path.string() + ": " + err.what());
        }
      }();
      if (frame.camera_id() != e.camera_id || frame.timestamp() != e.timestamp) {
        throw ConfigError(e.path.string() + ": header does not match the manifest entry");
      }
      handle(frame);
    }
  }
  tables.flush();
  if (!tables) throw std::runtime_error("failed writing roitables.ndjson");

  std::cout << "frames " << frames << " alarm_rows " << alarm_rows << " deviation_frames " << flagged;
  if (!args.server.empty()) {
    std::cout << " delivered " << delivery.delivered() << " spooled " << delivery.spooled();
  }
  std::cout << '\n';
  if (delivery.unreachable()) {
    std::cerr << "thermwatch: partial delivery, " << delivery.spooled() << " tables in "
              << (out / "spool.ndjson").string() << '\n';
    return kPartialDelivery;
  }
  if (delivery.server_errors() > 0) return kServerError;
  return kOk;
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  std::string listen = "127.0.0.1:8080";
  std::string log = "thermwatch-alarms.log";
};

std::pair<std::string, int> split_endpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0) throw ConfigError("--listen expects host:port");
  try {
    std::size_t used = 0;
    const std::string port_text = endpoint.substr(colon + 1);
    const int port = std::stoi(port_text, &used);
    if (used != port_text.size() || port < 0 || port > 65535) throw std::out_of_range(port_text);
    return {endpoint.substr(0, colon), port};
  } catch (const std::exception&) {
    throw ConfigError("--listen: bad port in '" + endpoint + "'");
  }
}

int run_serve(const ServeArgs& args) {
  const auto [host, port] = split_endpoint(args.listen);

  // Route SIGINT/SIGTERM to a waiter thread; all later threads inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::optional<AlarmStore> store;
  try {
    store.emplace(args.log);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("cannot replay log: ") + e.what());
  } catch (const StorageError& e) {
    throw ConfigError(e.what());
  }
  AlarmServer server(*store);
  int bound = 0;
  try {
    bound = server.bind(host, port);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  std::cout << "listening on http://" << host << ':' << bound << " (log " << args.log << ", "
            << store->log_records() << " records replayed)" << std::endl;
  server.serve();
  // serve() may also return on its own (e.g. socket error); release the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  std::cout << "stopped" << std::endl;
  return kOk;
}

// ---------------------------------------------------------------- query

struct QueryArgs {
  std::string server = "http://127.0.0.1:8080";
  std::string from;
  std::string to;
  std::string camera;
  std::optional<int> roi;
  bool only_alarms = false;
  bool stats = false;
  bool json = false;
};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

int run_query(const QueryArgs& args) {
  AlarmQuery q;
  if (!args.from.empty()) q.from = parse_time_arg(args.from, "--from");
  if (!args.to.empty()) q.to = parse_time_arg(args.to, "--to");
  if (!args.camera.empty()) q.camera_id = args.camera;
  q.roi_id = args.roi;
  q.only_alarms = args.only_alarms;
  try {
    q.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }

  std::optional<AlarmClient> client;
  try {
    client.emplace(args.server);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }

  if (args.stats) {
    const AlarmStats s = client->stats(q.from, q.to);
    if (args.json) {
      std::cout << stats_to_json(s) << '\n';
      return kOk;
    }
    std::cout << "tables_ingested " << s.tables_ingested << "\ncameras_reporting " << s.cameras_reporting
              << '\n';
    for (int id = 1; id <= kRoiCount; ++id) {
      std::cout << "alarms_roi_" << id << ' ' << s.alarms_by_roi[static_cast<std::size_t>(id - 1)] << '\n';
    }
    return kOk;
  }

  const std::vector<RoiTable> tables = client->query(q);
  if (args.json) {
    std::cout << tables_to_json(tables) << '\n';
    return kOk;
  }
  for (const RoiTable& t : tables) {
    for (const RoiTableRow& row : t.rows) {
      if (q.roi_id && row.roi_id != *q.roi_id) continue;
      if (q.only_alarms && !q.roi_id && row.alarm_bit == 0) continue;
      std::cout << format_iso8601(t.timestamp) << ' ' << t.camera_id << ' ' << row.roi_id << ' ' << row.name
                << ' ' << fixed(row.recorded_c) << ' ' << (row.predicted_c ? fixed(*row.predicted_c) : "-")
                << ' ' << row.alarm_bit << ' ' << to_string(row.model_status) << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal anomaly detection for transformer substations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "thermwatch 0.1.0");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate frames and ROI masks from a scenario");
  simulate->add_option("--scenario", sim.scenario, "Scenario YAML file")->envname("THERMWATCH_SCENARIO")->required();
  simulate->add_option("--span-hours", sim.span_hours, "Override the scenario span");
  simulate->add_option("--out", sim.out, "Output directory")->envname("THERMWATCH_OUT")->required();

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Run detection on frames or a live simulation");
  detect->add_option("--frames", det.frames, "Directory written by 'simulate'")->envname("THERMWATCH_FRAMES");
  detect->add_option("--scenario", det.scenario, "Simulate inline from this scenario")->envname("THERMWATCH_SCENARIO");
  detect->add_option("--span-hours", det.span_hours, "Override the scenario span (with --scenario)");
  detect->add_option("--masks", det.masks, "Directory of .tmask files")->envname("THERMWATCH_MASKS");
  detect->add_option("--server", det.server, "Alarm server base URL, e.g. http://127.0.0.1:8080")
      ->envname("THERMWATCH_SERVER");
  detect->add_option("--out", det.out, "Output directory")->envname("THERMWATCH_OUT")->required();
  detect->add_option("--threshold", det.threshold, "Alarm margin in degrees C for every ROI")
      ->envname("THERMWATCH_THRESHOLD")
      ->capture_default_str();
  detect->add_option("--threshold-roi", det.threshold_roi, "Per-ROI margin override, <roi_id>=<degrees C>");
  detect->add_option("--alpha", det.alpha, "Blend factor of the latest day against the previous curve")
      ->capture_default_str();
  detect->add_flag("--no-segmentation", det.no_segmentation, "Skip Otsu/MSER segmentation");

  ServeArgs srv;
  auto* serve = app.add_subcommand("serve", "Run the alarm server");
  serve->add_option("--listen", srv.listen, "host:port (port 0 picks a free port)")
      ->envname("THERMWATCH_LISTEN")
      ->capture_default_str();
  serve->add_option("--log", srv.log, "Append-only alarm log")->envname("THERMWATCH_LOG")->capture_default_str();

  QueryArgs qry;
  auto* query = app.add_subcommand("query", "Query alarms or statistics from a server");
  query->add_option("--server", qry.server, "Alarm server base URL")->envname("THERMWATCH_SERVER")->capture_default_str();
  query->add_option("--from", qry.from, "Start of range (ISO-8601 UTC, inclusive)");
  query->add_option("--to", qry.to, "End of range (ISO-8601 UTC, inclusive)");
  query->add_option("--camera", qry.camera, "Only this camera");
  query->add_option("--roi", qry.roi, "Only this ROI (with --only-alarms: tables alarming on it)");
  query->add_flag("--only-alarms", qry.only_alarms, "Only tables with an alarm");
  query->add_flag("--stats", qry.stats, "Print statistics instead of tables");
  query->add_flag("--json", qry.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*detect) return run_detect(det);
    if (*serve) return run_serve(srv);
    if (*query) return run_query(qry);
  } catch (const ConfigError& e) {
    std::cerr << "thermwatch: " << e.what() << '\n';
    return kConfig;
  } catch (const ServerError& e) {
    std::cerr << "thermwatch: " << e.what() << '\n';
    return kServerError;
  } catch (const std::exception& e) {
    std::cerr << "thermwatch: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
