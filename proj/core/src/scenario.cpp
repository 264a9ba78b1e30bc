// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "thermwatch/errors.hpp"

namespace thermwatch {

namespace {

std::size_t line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  throw ParseError(what, line_of(node));
}

void check_keys(const YAML::Node& map, std::initializer_list<const char*> allowed, const char* where) {
  if (!map.IsMap()) fail(map, std::string(where) + " must be a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(kv.first, std::string("unknown key '") + key + "' in " + where);
  }
}

template <typename T>
T scalar(const YAML::Node& node, const char* what) {
  if (!node.IsScalar()) fail(node, std::string(what) + " must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, std::string("invalid value for ") + what + ": '" + node.Scalar() + "'");
  }
}

double number(const YAML::Node& node, const char* what) {
  const double v = scalar<double>(node, what);
  if (!std::isfinite(v)) fail(node, std::string(what) + " must be finite");
  return v;
}

Instant instant(const YAML::Node& node, const char* what) {
  try {
    return parse_iso8601(scalar<std::string>(node, what));
  } catch (const ParseError& e) {
    fail(node, e.what());
  }
}

void apply_profile(const YAML::Node& node, DailyProfile& p) {
  check_keys(node, {"ambient_mean_c", "ambient_amplitude_c", "load_peak_c", "peak_hour"}, "roi profile");
  if (node["ambient_mean_c"]) p.ambient_mean_c = number(node["ambient_mean_c"], "ambient_mean_c");
  if (node["ambient_amplitude_c"]) {
    p.ambient_amplitude_c = number(node["ambient_amplitude_c"], "ambient_amplitude_c");
  }
  if (node["load_peak_c"]) p.load_peak_c = number(node["load_peak_c"], "load_peak_c");
  if (node["peak_hour"]) p.peak_hour = number(node["peak_hour"], "peak_hour");
}

void apply_scene(const YAML::Node& node, SceneSpec& scene) {
  check_keys(node, {"rows", "cols", "noise_sigma_c", "rois"}, "scene");
  if (node["rows"]) scene.rows = scalar<int>(node["rows"], "rows");
  if (node["cols"]) scene.cols = scalar<int>(node["cols"], "cols");
  if (node["noise_sigma_c"]) scene.noise_sigma_c = number(node["noise_sigma_c"], "noise_sigma_c");
  if (const YAML::Node rois = node["rois"]) {
    if (!rois.IsMap()) fail(rois, "scene.rois must map roi ids to profiles");
    for (const auto& kv : rois) {
      const int id = scalar<int>(kv.first, "roi id");
      if (!valid_roi(id)) fail(kv.first, "roi id must be in 1..9");
      apply_profile(kv.second, scene.rois[static_cast<std::size_t>(id - 1)]);
    }
  }
  try {
    scene.validate();
  } catch (const InvalidInput& e) {
    fail(node, e.what());
  }
}

std::pair<double, double> point(const YAML::Node& node) {
  if (!node.IsSequence() || node.size() != 2) fail(node, "center must be [row, col]");
  return {number(node[0], "center row"), number(node[1], "center col")};
}

AnomalyEvent parse_event(const YAML::Node& node) {
  check_keys(node, {"kind", "camera", "roi", "center", "radius", "start", "end", "magnitude"}, "anomaly");
  for (const char* key : {"kind", "camera", "start", "end", "magnitude"}) {
    if (!node[key]) fail(node, std::string("anomaly is missing '") + key + "'");
  }
  AnomalyEvent e;
  try {
    e.kind = parse_anomaly_kind(scalar<std::string>(node["kind"], "kind"));
  } catch (const ParseError& err) {
    fail(node["kind"], err.what());
  }
  e.camera_id = scalar<std::string>(node["camera"], "camera");
  e.start = instant(node["start"], "start");
  e.end = instant(node["end"], "end");
  e.magnitude = number(node["magnitude"], "magnitude");
  if (node["roi"]) e.roi_id = scalar<int>(node["roi"], "roi");
  if (node["center"]) std::tie(e.center_row, e.center_col) = point(node["center"]);
  if (node["radius"]) e.radius_px = number(node["radius"], "radius");
  if (e.kind == AnomalyKind::hot_spot && !node["roi"]) fail(node, "hot_spot requires 'roi'");
  if (e.kind != AnomalyKind::hot_spot && !node["center"]) fail(node, "this anomaly requires 'center'");
  if (e.kind == AnomalyKind::intruder && !node["radius"]) fail(node, "intruder requires 'radius'");
  try {
    AnomalyScript{{e}}.validate();
  } catch (const InvalidInput& err) {
    fail(node, err.what());
  }
  return e;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0);
  }
  if (!root.IsMap()) throw ParseError("scenario must be a YAML mapping");
  check_keys(root, {"rng_seed", "start", "span_hours", "topology", "scene", "cameras", "anomalies"},
             "scenario");

  Scenario sc;
  if (!root["rng_seed"]) throw ParseError("scenario is missing mandatory 'rng_seed'");
  sc.rng_seed = scalar<std::uint64_t>(root["rng_seed"], "rng_seed");
  if (root["start"]) sc.start = instant(root["start"], "start");
  if (root["span_hours"]) {
    const double hours = number(root["span_hours"], "span_hours");
    if (hours < 0) fail(root["span_hours"], "span_hours must be >= 0");
    sc.span = Seconds{static_cast<long long>(std::llround(hours * 3600.0))};
  }

  SceneSpec scene = default_scene(sc.rng_seed);
  if (root["scene"]) apply_scene(root["scene"], scene);

  const std::string topology =
      root["topology"] ? scalar<std::string>(root["topology"], "topology") : (root["cameras"] ? "explicit" : "default");
  if (topology == "default") {
    if (root["cameras"]) fail(root["cameras"], "'cameras' cannot be combined with topology: default");
    sc.cameras = default_topology(sc.rng_seed, scene);
  } else if (topology == "explicit") {
    const YAML::Node cams = root["cameras"];
    if (!cams || !cams.IsSequence() || cams.size() == 0) {
      throw ParseError("topology: explicit requires a non-empty 'cameras' list", line_of(root));
    }
    std::uint64_t index = 0;
    for (const YAML::Node& c : cams) {
      check_keys(c, {"id", "pc", "link", "scene", "seed"}, "camera");
      if (!c["id"] || !c["pc"] || !c["link"]) fail(c, "camera needs 'id', 'pc' and 'link'");
      CameraConfig cfg;
      cfg.camera_id = scalar<std::string>(c["id"], "id");
      cfg.pc_id = scalar<int>(c["pc"], "pc");
      try {
        cfg.link = parse_link(scalar<std::string>(c["link"], "link"));
      } catch (const ParseError& e) {
        fail(c["link"], e.what());
      }
      cfg.scene = scene;
      cfg.scene.rng_seed = sc.rng_seed * 0x9e3779b97f4a7c15ULL + (++index);
      if (c["seed"]) cfg.scene.rng_seed = scalar<std::uint64_t>(c["seed"], "seed");
      if (c["scene"]) apply_scene(c["scene"], cfg.scene);
      sc.cameras.push_back(std::move(cfg));
    }
    try {
      validate_configs(sc.cameras);
    } catch (const InvalidInput& e) {
      fail(cams, e.what());
    }
  } else {
    fail(root["topology"], "topology must be 'default' or 'explicit'");
  }

  if (const YAML::Node events = root["anomalies"]) {
    if (!events.IsSequence()) fail(events, "anomalies must be a list");
    std::set<std::string> ids;
    for (const auto& c : sc.cameras) ids.insert(c.camera_id);
    for (const YAML::Node& ev : events) {
      AnomalyEvent e = parse_event(ev);
      if (!ids.count(e.camera_id)) fail(ev, "anomaly refers to unknown camera '" + e.camera_id + "'");
      sc.script.events.push_back(std::move(e));
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

}  // namespace thermwatch
