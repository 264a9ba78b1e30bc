// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "thermwatch/errors.hpp"
#include "thermwatch/segmentation.hpp"

namespace thermwatch {

namespace {

__extension__ typedef unsigned __int128 u128;

// sign(a/b - c/d) for b, d > 0, by simultaneous continued-fraction expansion.
int compare_fractions(u128 a, u128 b, u128 c, u128 d) {
  for (;;) {
    const u128 qa = a / b;
    const u128 qc = c / d;
    if (qa != qc) return qa < qc ? -1 : 1;
    const u128 ra = a % b;
    const u128 rc = c % d;
    if (ra == 0 || rc == 0) {
      if (ra == rc) return 0;
      return ra == 0 ? -1 : 1;
    }
    // ra/b < rc/d  <=>  d/rc < b/ra
    const u128 next_a = d;
    const u128 next_c = b;
    a = next_a;
    b = rc;
    c = next_c;
    d = ra;
  }
}

constexpr std::uint64_t kMaxTotal = std::uint64_t{1} << 28;

}  // namespace

double Quantized::upper_edge_c(int bin) const {
  if (hi == lo) return lo;
  return lo + (hi - lo) * (static_cast<double>(bin) + 1.0) / kHistogramBins;
}

Quantized quantize(const ThermalFrame& frame) {
  Quantized q;
  const auto px = frame.pixels();
  const auto [mn, mx] = std::minmax_element(px.begin(), px.end());
  q.lo = *mn;
  q.hi = *mx;
  q.bins.resize(px.size(), 0);
  if (q.hi == q.lo) return q;
  const double span = q.hi - q.lo;
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double scaled = std::floor((px[i] - q.lo) / span * kHistogramBins);
    q.bins[i] = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, double{kHistogramBins - 1}));
  }
  return q;
}

Histogram histogram_of(std::span<const std::uint8_t> bins) {
  Histogram h{};
  for (auto b : bins) ++h[b];
  return h;
}

int otsu_threshold(const Histogram& histogram) {
  u128 total = 0;
  u128 weighted = 0;
  for (int i = 0; i < kHistogramBins; ++i) {
    total += histogram[static_cast<std::size_t>(i)];
    weighted += static_cast<u128>(histogram[static_cast<std::size_t>(i)]) * static_cast<u128>(i);
  }
  if (total == 0) throw InvalidInput("otsu_threshold: histogram has no samples");
  if (total > kMaxTotal) throw InvalidInput("otsu_threshold: histogram total exceeds 2^28");

  int first = 0;
  while (histogram[static_cast<std::size_t>(first)] == 0) ++first;

  // sigma_B^2(t) * N^2 = (N*S0 - n0*S)^2 / (n0*n1); the N^2 factor is common to all t.
  int best = first;
  u128 best_num = 0;
  u128 best_den = 1;
  u128 n0 = 0;
  u128 s0 = 0;
  for (int t = first; t < kHistogramBins; ++t) {
    n0 += histogram[static_cast<std::size_t>(t)];
    s0 += static_cast<u128>(histogram[static_cast<std::size_t>(t)]) * static_cast<u128>(t);
    const u128 n1 = total - n0;
    if (n1 == 0) break;
    const u128 lhs = total * s0;
    const u128 rhs = n0 * weighted;
    const u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    const u128 num = diff * diff;
    const u128 den = n0 * n1;
    if (compare_fractions(num, den, best_num, best_den) > 0) {
      best = t;
      best_num = num;
      best_den = den;
    }
  }
  return best;
}

}  // namespace thermwatch
