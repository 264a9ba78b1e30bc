// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "thermwatch/simulation.hpp"

namespace thermwatch {

/// Fleet, scene and anomaly script for a simulation run. See docs/scenario.md.
struct Scenario {
  std::uint64_t rng_seed = 0;
  Instant start = from_unix(1717200000);  // 2024-06-01T00:00:00Z
  Seconds span = std::chrono::hours{24};
  std::vector<CameraConfig> cameras;
  AnomalyScript script;
};

/// Parses a YAML scenario. `rng_seed` is mandatory. Throws ParseError carrying
/// the offending line for syntax and schema errors.
Scenario parse_scenario(std::string_view yaml);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace thermwatch
