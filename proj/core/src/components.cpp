// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <memory>
#include <vector>

#include "thermwatch/errors.hpp"
#include "thermwatch/segmentation.hpp"

namespace thermwatch {

ComponentLabeling label_components(const ThermalFrame& frame, std::span<const bool> foreground) {
  if (foreground.size() != frame.size()) {
    throw InvalidInput("label_components: foreground size does not match frame");
  }
  ComponentLabeling out;
  out.rows = frame.rows();
  out.cols = frame.cols();
  out.labels.assign(frame.size(), 0);

  const int rows = frame.rows();
  const int cols = frame.cols();
  const auto px = frame.pixels();
  std::vector<std::size_t> stack;

  for (std::size_t seed = 0; seed < foreground.size(); ++seed) {
    if (!foreground[seed] || out.labels[seed] != 0) continue;
    Component comp;
    comp.id = static_cast<int>(out.components.size()) + 1;
    double temp_sum = 0.0;
    double row_sum = 0.0;
    double col_sum = 0.0;

    out.labels[seed] = comp.id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const int r = static_cast<int>(idx / static_cast<std::size_t>(cols));
      const int c = static_cast<int>(idx % static_cast<std::size_t>(cols));
      ++comp.area;
      comp.bbox.extend(r, c);
      temp_sum += px[idx];
      row_sum += r;
      col_sum += c;

      auto visit = [&](int nr, int nc) {
        if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) return;
        const std::size_t n = static_cast<std::size_t>(nr) * cols + nc;
        if (foreground[n] && out.labels[n] == 0) {
          out.labels[n] = comp.id;
          stack.push_back(n);
        }
      };
      visit(r - 1, c);
      visit(r + 1, c);
      visit(r, c - 1);
      visit(r, c + 1);
    }
    const double n = static_cast<double>(comp.area);
    comp.mean_temp_c = temp_sum / n;
    comp.centroid_row = row_sum / n;
    comp.centroid_col = col_sum / n;
    out.components.push_back(comp);
  }
  return out;
}

OtsuSegmentation segment_otsu(const ThermalFrame& frame) {
  const Quantized q = quantize(frame);
  OtsuSegmentation seg;
  seg.threshold_bin = otsu_threshold(histogram_of(q.bins));
  seg.threshold_c = q.upper_edge_c(seg.threshold_bin);

  // std::vector<bool> has no contiguous storage for std::span.
  std::unique_ptr<bool[]> mask(new bool[q.bins.size()]);
  for (std::size_t i = 0; i < q.bins.size(); ++i) mask[i] = q.bins[i] > seg.threshold_bin;
  seg.foreground = label_components(frame, std::span<const bool>(mask.get(), q.bins.size()));
  return seg;
}

}  // namespace thermwatch
