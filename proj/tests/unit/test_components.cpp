// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "thermwatch/segmentation.hpp"

using namespace thermwatch;

namespace {

std::vector<long long> sorted_areas(const OtsuSegmentation& seg) {
  std::vector<long long> out;
  for (const auto& c : seg.foreground.components) out.push_back(c.area);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<bool> foreground_of(const OtsuSegmentation& seg) {
  std::vector<bool> fg(seg.foreground.labels.size());
  for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = seg.foreground.labels[i] != 0;
  return fg;
}

}  // namespace

TEST_CASE("segment_otsu: uniform frame has no foreground") {
  const auto seg = segment_otsu(synthetic::uniform(10, 10, 20.0));
  CHECK(seg.threshold_bin == 0);
  CHECK(seg.foreground.components.empty());
}

TEST_CASE("segment_otsu: one hot block") {
  const auto f = synthetic::with_block(synthetic::uniform(10, 10, 20.0), 3, 4, 2, 2, 80.0);
  const auto seg = segment_otsu(f);
  REQUIRE(seg.foreground.components.size() == 1);
  const Component& c = seg.foreground.components[0];
  CHECK(c.area == 4);
  CHECK(c.bbox == BoundingBox{3, 4, 4, 5});
  CHECK(c.mean_temp_c == 80.0);
  CHECK(oracle::component_areas(10, 10, foreground_of(seg)) == std::vector<long long>{4});
  CHECK(seg.threshold_c > 20.0);
  CHECK(seg.threshold_c < 80.0);
}

TEST_CASE("segment_otsu: two disjoint hot blocks") {
  auto f = synthetic::with_block(synthetic::uniform(12, 12, 20.0), 1, 1, 2, 3, 80.0);
  f = synthetic::with_block(f, 7, 6, 3, 3, 75.0);
  const auto seg = segment_otsu(f);
  CHECK(sorted_areas(seg) == std::vector<long long>{6, 9});
  CHECK(oracle::component_areas(12, 12, foreground_of(seg)) == sorted_areas(seg));
}

TEST_CASE("segment_otsu: diagonal neighbours are separate under 4-connectivity") {
  auto f = synthetic::with_block(synthetic::uniform(6, 6, 20.0), 1, 1, 1, 1, 80.0);
  f = synthetic::with_block(f, 2, 2, 1, 1, 80.0);
  CHECK(segment_otsu(f).foreground.components.size() == 2);
}

TEST_CASE("segment_otsu: components agree with the union-find oracle on random frames") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> temp(0.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 5 + static_cast<int>(rng() % 30), cols = 5 + static_cast<int>(rng() % 30);
    std::vector<double> px(static_cast<std::size_t>(rows) * cols);
    for (auto& v : px) v = temp(rng);
    const auto seg = segment_otsu(ThermalFrame("cam", synthetic::t0(), rows, cols, px));
    long long total = 0;
    for (const auto& c : seg.foreground.components) total += c.area;
    CHECK(total <= rows * cols);
    REQUIRE(oracle::component_areas(rows, cols, foreground_of(seg)) == sorted_areas(seg));
  }
}

TEST_CASE("segment_otsu: areas are invariant under positive affine temperature maps") {
  // Values on a dyadic grid keep every affine map below exact in binary floating point.
  std::mt19937_64 rng(1234);
  const double scales[] = {0.5, 2.0, 4.0, 0.25};
  const double offsets[] = {-16.0, 0.0, 3.5, 273.25};
  for (int trial = 0; trial < 40; ++trial) {
    const int rows = 8 + static_cast<int>(rng() % 24), cols = 8 + static_cast<int>(rng() % 24);
    std::vector<double> px(static_cast<std::size_t>(rows) * cols);
    for (auto& v : px) v = static_cast<double>(rng() % 400) * 0.25;
    const auto base = segment_otsu(ThermalFrame("cam", synthetic::t0(), rows, cols, px));
    const double scale = scales[trial % 4];
    const double offset = offsets[(trial / 4) % 4];
    std::vector<double> mapped(px);
    for (auto& v : mapped) v = v * scale + offset;
    const auto seg = segment_otsu(ThermalFrame("cam", synthetic::t0(), rows, cols, mapped));
    CAPTURE(trial);
    REQUIRE(seg.foreground.labels == base.foreground.labels);
  }
}
