// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "thermwatch/errors.hpp"
#include "thermwatch/segmentation.hpp"

using namespace thermwatch;

TEST_CASE("otsu: all mass in one bin returns that bin") {
  Histogram h{};
  h[10] = 500;
  CHECK(oracle::otsu_brute_force(h) == 10);
  CHECK(otsu_threshold(h) == 10);
}

TEST_CASE("otsu: bimodal histogram matches the exhaustive oracle") {
  Histogram h{};
  for (int i = 40; i <= 60; ++i) h[static_cast<std::size_t>(i)] = 100;
  for (int i = 180; i <= 200; ++i) h[static_cast<std::size_t>(i)] = 100;
  const int expected = oracle::otsu_brute_force(h);
  // Every split in the empty gap separates the modes equally well; smallest wins.
  CHECK(expected == 60);
  CHECK(otsu_threshold(h) == expected);
  CHECK(otsu_threshold(h) >= 60);
  CHECK(otsu_threshold(h) <= 179);
}

TEST_CASE("otsu: seeded random histograms equal the exhaustive argmax") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::mt19937_64 rng(seed);
    const Histogram h = oracle::random_histogram(rng);
    CAPTURE(seed);
    REQUIRE(otsu_threshold(h) == oracle::otsu_brute_force(h));
  }
}

TEST_CASE("otsu: exact ties between distinct splits pick the smallest") {
  // Symmetric three-spike histogram: splitting after bin 0 or after bin 1 is
  // equally good, and the scan must not be swayed by rounding.
  Histogram h{};
  h[0] = 7;
  h[1] = 3;
  h[2] = 7;
  CHECK(oracle::between_class_variance(h, 0) == oracle::between_class_variance(h, 1));
  CHECK(otsu_threshold(h) == 0);
}

TEST_CASE("otsu: invalid input") {
  Histogram zero{};
  CHECK_THROWS_AS(otsu_threshold(zero), InvalidInput);
  Histogram huge{};
  huge[3] = (std::uint64_t{1} << 28) + 1;
  CHECK_THROWS_AS(otsu_threshold(huge), InvalidInput);
}

TEST_CASE("quantize maps frame min/max onto bins 0..255") {
  const ThermalFrame f("cam", synthetic::t0(), 1, 4, {10.0, 20.0, 29.99, 30.0});
  const Quantized q = quantize(f);
  CHECK(q.bins[0] == 0);
  CHECK(q.bins[1] == 128);
  CHECK(q.bins[2] == 255);
  CHECK(q.bins[3] == 255);
  CHECK(q.upper_edge_c(127) == doctest::Approx(20.0));

  const Quantized flat = quantize(synthetic::uniform(3, 3, 20.0));
  for (auto b : flat.bins) CHECK(b == 0);
}
