// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/mser.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "thermwatch/errors.hpp"
#include "thermwatch/segmentation.hpp"

namespace thermwatch {

namespace {

struct TreeNode {
  int level = 0;
  long long area = 0;
  std::size_t seed = 0;
  int parent = -1;
  std::vector<int> children;
  double variation = 0.0;
};

// Component tree of the upper level sets {bin >= g}, built by union-find while
// sweeping g from 255 down to 0. A node is created whenever a component gains
// pixels at a level; it represents that component for every threshold in
// (parent.level, level].
class ComponentTree {
 public:
  ComponentTree(const std::vector<std::uint8_t>& bins, int rows, int cols)
      : rows_(rows), cols_(cols) {
    const std::size_t n = bins.size();
    uf_.resize(n);
    size_.assign(n, 0);
    added_.assign(n, false);
    current_.assign(n, -1);
    pending_.resize(n);

    std::array<std::vector<std::size_t>, kHistogramBins> by_level;
    for (std::size_t i = 0; i < n; ++i) by_level[bins[i]].push_back(i);

    std::vector<std::size_t> dirty;
    for (int g = kHistogramBins - 1; g >= 0; --g) {
      const auto& level_pixels = by_level[static_cast<std::size_t>(g)];
      if (level_pixels.empty()) continue;
      dirty.clear();
      for (std::size_t p : level_pixels) {
        added_[p] = true;
        uf_[p] = p;
        size_[p] = 1;
        dirty.push_back(p);
        const int r = static_cast<int>(p / static_cast<std::size_t>(cols_));
        const int c = static_cast<int>(p % static_cast<std::size_t>(cols_));
        if (r > 0) dirty.push_back(join(p, p - static_cast<std::size_t>(cols_)));
        if (r + 1 < rows_) dirty.push_back(join(p, p + static_cast<std::size_t>(cols_)));
        if (c > 0) dirty.push_back(join(p, p - 1));
        if (c + 1 < cols_) dirty.push_back(join(p, p + 1));
      }
      for (std::size_t d : dirty) {
        const std::size_t root = find(d);
        const int cur = current_[root];
        if (cur >= 0 && nodes_[static_cast<std::size_t>(cur)].level == g) continue;
        TreeNode node;
        node.level = g;
        node.area = static_cast<long long>(size_[root]);
        node.seed = root;
        node.children = std::move(pending_[root]);
        pending_[root].clear();
        const int id = static_cast<int>(nodes_.size());
        for (int child : node.children) nodes_[static_cast<std::size_t>(child)].parent = id;
        nodes_.push_back(std::move(node));
        current_[root] = id;
      }
    }
  }

  std::vector<TreeNode>& nodes() { return nodes_; }

 private:
  std::size_t find(std::size_t x) {
    while (uf_[x] != x) {
      uf_[x] = uf_[uf_[x]];
      x = uf_[x];
    }
    return x;
  }

  // Moves the component's finished node into its pending-children list.
  void retire(std::size_t root) {
    if (current_[root] >= 0) {
      pending_[root].push_back(current_[root]);
      current_[root] = -1;
    }
  }

  // Unites p's set with neighbour q's set (if q is already present); returns p's root.
  std::size_t join(std::size_t p, std::size_t q) {
    if (!added_[q]) return find(p);
    std::size_t a = find(p);
    std::size_t b = find(q);
    if (a == b) return a;
    retire(a);
    retire(b);
    if (size_[a] < size_[b]) std::swap(a, b);
    uf_[b] = a;
    size_[a] += size_[b];
    auto& into = pending_[a];
    auto& from = pending_[b];
    into.insert(into.end(), from.begin(), from.end());
    from.clear();
    from.shrink_to_fit();
    return a;
  }

  int rows_;
  int cols_;
  std::vector<std::size_t> uf_;
  std::vector<std::size_t> size_;
  std::vector<bool> added_;
  std::vector<int> current_;
  std::vector<std::vector<int>> pending_;
  std::vector<TreeNode> nodes_;
};

bool is_ancestor(const std::vector<TreeNode>& nodes, int ancestor, int node) {
  for (int cur = nodes[static_cast<std::size_t>(node)].parent; cur >= 0;
       cur = nodes[static_cast<std::size_t>(cur)].parent) {
    if (cur == ancestor) return true;
  }
  return false;
}

MserRegion materialise(const ThermalFrame& frame, const Quantized& q, const TreeNode& node) {
  MserRegion region;
  region.level = node.level;
  region.variation = node.variation;

  const int rows = frame.rows();
  const int cols = frame.cols();
  std::vector<bool> seen(q.bins.size(), false);
  std::vector<std::size_t> stack{node.seed};
  seen[node.seed] = true;
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    region.pixels.push_back(p);
    const int r = static_cast<int>(p / static_cast<std::size_t>(cols));
    const int c = static_cast<int>(p % static_cast<std::size_t>(cols));
    auto visit = [&](int nr, int nc) {
      if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) return;
      const std::size_t n = static_cast<std::size_t>(nr) * cols + nc;
      if (!seen[n] && q.bins[n] >= node.level) {
        seen[n] = true;
        stack.push_back(n);
      }
    };
    visit(r - 1, c);
    visit(r + 1, c);
    visit(r, c - 1);
    visit(r, c + 1);
  }
  std::sort(region.pixels.begin(), region.pixels.end());

  double temp_sum = 0.0;
  double row_sum = 0.0;
  double col_sum = 0.0;
  for (std::size_t p : region.pixels) {
    const int r = static_cast<int>(p / static_cast<std::size_t>(cols));
    const int c = static_cast<int>(p % static_cast<std::size_t>(cols));
    region.bbox.extend(r, c);
    temp_sum += frame.pixels()[p];
    row_sum += r;
    col_sum += c;
  }
  region.area = static_cast<long long>(region.pixels.size());
  const double n = static_cast<double>(region.area);
  region.mean_temp_c = temp_sum / n;
  region.centroid_row = row_sum / n;
  region.centroid_col = col_sum / n;
  return region;
}

}  // namespace

std::vector<MserRegion> mser_regions(const ThermalFrame& frame, const MserParams& params) {
  if (params.delta < 1) throw InvalidInput("mser: delta must be >= 1");
  if (!(params.min_area_frac > 0.0 && params.min_area_frac < params.max_area_frac &&
        params.max_area_frac <= 1.0)) {
    throw InvalidInput("mser: require 0 < min_area_frac < max_area_frac <= 1");
  }
  if (!(params.max_variation >= 0.0)) throw InvalidInput("mser: max_variation must be >= 0");
  if (!(params.min_diversity >= 0.0 && params.min_diversity < 1.0)) {
    throw InvalidInput("mser: min_diversity must be in [0, 1)");
  }

  const Quantized q = quantize(frame);
  if (q.hi == q.lo) return {};

  ComponentTree tree(q.bins, frame.rows(), frame.cols());
  auto& nodes = tree.nodes();

  for (auto& node : nodes) {
    const int target = node.level - params.delta;
    const TreeNode* outer = &node;
    while (outer->parent >= 0 && nodes[static_cast<std::size_t>(outer->parent)].level >= target) {
      outer = &nodes[static_cast<std::size_t>(outer->parent)];
    }
    node.variation =
        static_cast<double>(outer->area - node.area) / static_cast<double>(node.area);
  }

  const double total = static_cast<double>(frame.size());
  const double min_area = params.min_area_frac * total;
  const double max_area = params.max_area_frac * total;

  // A stability run is a chain of admissible nodes in which each step to the
  // parent grows the area by at most max_variation. A run is one region seen over
  // a range of thresholds; only its most stable node is reported.
  auto admissible = [&](const TreeNode& node) {
    const double area = static_cast<double>(node.area);
    return area >= min_area && area <= max_area && node.variation <= params.max_variation;
  };
  std::vector<int> run(nodes.size());
  std::iota(run.begin(), run.end(), 0);
  auto run_of = [&](int x) {
    while (run[static_cast<std::size_t>(x)] != x) {
      run[static_cast<std::size_t>(x)] = run[static_cast<std::size_t>(run[static_cast<std::size_t>(x)])];
      x = run[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& node = nodes[i];
    if (node.parent < 0 || !admissible(node)) continue;
    const TreeNode& parent = nodes[static_cast<std::size_t>(node.parent)];
    const double growth = static_cast<double>(parent.area - node.area) / static_cast<double>(node.area);
    if (admissible(parent) && growth <= params.max_variation) {
      run[static_cast<std::size_t>(run_of(static_cast<int>(i)))] = run_of(node.parent);
    }
  }
  // Threshold levels covered by each run: node i stands for (parent level, level].
  std::vector<int> run_top(nodes.size(), -1);
  std::vector<int> run_bottom(nodes.size(), kHistogramBins);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!admissible(nodes[i])) continue;
    const auto r = static_cast<std::size_t>(run_of(static_cast<int>(i)));
    const int parent = nodes[i].parent;
    const int low = parent >= 0 ? nodes[static_cast<std::size_t>(parent)].level + 1 : 0;
    run_top[r] = std::max(run_top[r], nodes[i].level);
    run_bottom[r] = std::min(run_bottom[r], low);
  }
  // A run must stay admissible across a full +-delta window of thresholds.
  auto long_enough = [&](std::size_t r) { return run_top[r] - run_bottom[r] + 1 >= 2 * params.delta + 1; };

  // Most stable node of each run; ties go to the larger area, then the earlier node.
  std::vector<int> best(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!admissible(nodes[i])) continue;
    if (!long_enough(static_cast<std::size_t>(run_of(static_cast<int>(i))))) continue;
    int& b = best[static_cast<std::size_t>(run_of(static_cast<int>(i)))];
    if (b < 0) {
      b = static_cast<int>(i);
      continue;
    }
    const TreeNode& nb = nodes[static_cast<std::size_t>(b)];
    const TreeNode& ni = nodes[i];
    if (ni.variation < nb.variation || (ni.variation == nb.variation && ni.area > nb.area)) {
      b = static_cast<int>(i);
    }
  }
  std::vector<int> candidates;
  for (int b : best) {
    if (b >= 0) candidates.push_back(b);
  }

  // Most stable first; among equals prefer the larger region.
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    const TreeNode& na = nodes[static_cast<std::size_t>(a)];
    const TreeNode& nb = nodes[static_cast<std::size_t>(b)];
    if (na.variation != nb.variation) return na.variation < nb.variation;
    if (na.area != nb.area) return na.area > nb.area;
    return a < b;
  });
  std::vector<int> kept;
  for (int cand : candidates) {
    const TreeNode& nc = nodes[static_cast<std::size_t>(cand)];
    bool duplicate = false;
    for (int k : kept) {
      const TreeNode& nk = nodes[static_cast<std::size_t>(k)];
      const bool nested = is_ancestor(nodes, k, cand) || is_ancestor(nodes, cand, k);
      if (!nested) continue;
      const double big = static_cast<double>(std::max(nc.area, nk.area));
      const double small = static_cast<double>(std::min(nc.area, nk.area));
      if ((big - small) / big < params.min_diversity) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(cand);
  }

  std::sort(kept.begin(), kept.end(), [&](int a, int b) {
    const TreeNode& na = nodes[static_cast<std::size_t>(a)];
    const TreeNode& nb = nodes[static_cast<std::size_t>(b)];
    if (na.area != nb.area) return na.area > nb.area;
    if (na.level != nb.level) return na.level < nb.level;
    return na.seed < nb.seed;
  });

  std::vector<MserRegion> out;
  out.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    MserRegion region = materialise(frame, q, nodes[static_cast<std::size_t>(kept[i])]);
    region.id = static_cast<int>(i) + 1;
    // Regions are sorted by decreasing area, so any container precedes its contents;
    // the last container seen is the smallest one.
    for (std::size_t j = 0; j < i; ++j) {
      if (is_ancestor(nodes, kept[j], kept[i])) region.parent = out[j].id;
    }
    out.push_back(std::move(region));
  }
  return out;
}

}  // namespace thermwatch
