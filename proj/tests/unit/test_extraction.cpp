// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "thermwatch/errors.hpp"
#include "thermwatch/extraction.hpp"

using namespace thermwatch;

namespace {

// One-row scene: ROI 1 holds `roi_values`, ROIs 2..9 one pixel each at 0 C.
struct OneRoiScene {
  ThermalFrame frame;
  RoiMaskSet mask;
};

OneRoiScene one_roi(const std::vector<double>& roi_values) {
  const int n = static_cast<int>(roi_values.size());
  std::vector<double> px(roi_values);
  std::vector<std::uint8_t> labels(roi_values.size(), 1);
  for (int id = 2; id <= kRoiCount; ++id) {
    px.push_back(0.0);
    labels.push_back(static_cast<std::uint8_t>(id));
  }
  return {ThermalFrame("cam01", synthetic::t0(), 1, n + 8, px), RoiMaskSet("cam01", 1, n + 8, labels)};
}

}  // namespace

TEST_CASE("top-5% count uses the ceiling") {
  CHECK(top_fraction_count(1) == 1);
  CHECK(top_fraction_count(3) == 1);
  CHECK(top_fraction_count(20) == 1);
  CHECK(top_fraction_count(21) == 2);
  CHECK(top_fraction_count(100) == 5);
  CHECK(top_fraction_count(101) == 6);
}

TEST_CASE("extract_roi_temperature: worked examples") {
  SUBCASE("constant ROI") {
    const auto s = one_roi(std::vector<double>(100, 35.0));
    const RoiReading r = extract_roi_temperature(s.frame, s.mask, 1);
    CHECK(r.temperature_c == 35.0);
    CHECK(r.pixel_count == 100);
    CHECK(r.roi_id == 1);
    CHECK(r.camera_id == "cam01");
  }
  SUBCASE("five hot pixels out of a hundred") {
    std::vector<double> v(95, 30.0);
    v.insert(v.begin() + 40, 5, 80.0);
    const auto s = one_roi(v);
    CHECK(oracle::top5_sort_mean(v) == 80.0);
    CHECK(extract_roi_temperature(s.frame, s.mask, 1).temperature_c == 80.0);
  }
  SUBCASE("three pixels") {
    const auto s = one_roi({10.0, 20.0, 30.0});
    CHECK(oracle::top5_sort_mean({10.0, 20.0, 30.0}) == 30.0);
    CHECK(extract_roi_temperature(s.frame, s.mask, 1).temperature_c == 30.0);
  }
}

TEST_CASE("extract_roi_temperature: errors") {
  const auto s = one_roi({1.0, 2.0});
  CHECK_THROWS_AS(extract_roi_temperature(s.frame, s.mask, 0), InvalidInput);
  CHECK_THROWS_AS(extract_roi_temperature(s.frame, s.mask, 10), InvalidInput);
  const ThermalFrame wrong_size("cam01", synthetic::t0(), 2, 5, std::vector<double>(10, 1.0));
  CHECK_THROWS_AS(extract_roi_temperature(wrong_size, s.mask, 1), InvalidInput);
  const ThermalFrame other_cam("cam02", synthetic::t0(), 1, 10, std::vector<double>(10, 1.0));
  CHECK_THROWS_AS(extract_roi_temperature(other_cam, s.mask, 1), InvalidInput);
}

TEST_CASE("extract_roi_temperature: sort oracle, bounds and monotonicity") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> temp(-20.0, 120.0);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % (trial < 100 ? 200 : 10000);
    std::vector<double> v(n);
    for (auto& x : v) x = temp(rng);
    const auto s = one_roi(v);
    const double got = extract_roi_temperature(s.frame, s.mask, 1).temperature_c;
    const double want = oracle::top5_sort_mean(v);
    CAPTURE(n);
    REQUIRE(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    CHECK(got >= *mn);
    CHECK(got <= *mx);

    // Raising any one pixel never lowers the reading.
    std::vector<double> raised(v);
    const std::size_t i = rng() % n;
    raised[i] += std::uniform_real_distribution<double>(0.0, 50.0)(rng);
    const auto s2 = one_roi(raised);
    CHECK(extract_roi_temperature(s2.frame, s2.mask, 1).temperature_c >= got - 1e-12);
  }
}
