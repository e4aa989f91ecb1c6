#pragma once

// Binned-SAH bounding volume hierarchy over an indexed set of primitives.
// Build is deterministic: no randomization and stable partitions.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "math.hpp"

namespace roomgt {

struct bvh_node {
  bbox3 bounds;
  int   start = 0;  // leaf: first index into `primitives`; inner: left child
  int   count = 0;  // leaf: primitive count; inner: 0 (right child = left + 1)
};

struct bvh_tree {
  std::vector<bvh_node> nodes;
  std::vector<int>      primitives;
};

inline constexpr int bvh_max_leaf = 4;
inline constexpr int bvh_bins     = 16;

inline bvh_tree build_bvh(std::span<const bbox3> prim_bounds) {
  auto tree = bvh_tree{};
  auto n    = int(prim_bounds.size());
  tree.primitives.resize(n);
  std::iota(tree.primitives.begin(), tree.primitives.end(), 0);
  if (n == 0) return tree;

  auto centroids = std::vector<vec3>(n);
  for (int i = 0; i < n; i++) centroids[i] = prim_bounds[i].center();

  tree.nodes.reserve(2 * n);
  tree.nodes.push_back({});
  struct task {
    int node, start, end;
  };
  auto stack = std::vector<task>{{0, 0, n}};
  while (!stack.empty()) {
    auto [node_id, start, end] = stack.back();
    stack.pop_back();
    auto bounds = bbox3{}, cbounds = bbox3{};
    for (int i = start; i < end; i++) {
      bounds.expand(prim_bounds[tree.primitives[i]]);
      cbounds.expand(centroids[tree.primitives[i]]);
    }
    tree.nodes[node_id].bounds = bounds;
    int count = end - start;

    auto make_leaf = [&]() {
      tree.nodes[node_id].start = start;
      tree.nodes[node_id].count = count;
    };
    if (count <= bvh_max_leaf) {
      make_leaf();
      continue;
    }

    // Binned SAH over all three axes.
    double best_cost = infinity;
    int    best_axis = -1, best_split = -1;
    auto   ext       = cbounds.extent();
    for (int axis = 0; axis < 3; axis++) {
      if (ext[axis] <= 0) continue;
      auto bins   = std::array<bbox3, bvh_bins>{};
      auto counts = std::array<int, bvh_bins>{};
      double scale = bvh_bins / ext[axis];
      for (int i = start; i < end; i++) {
        int p = tree.primitives[i];
        int b = std::min(bvh_bins - 1, int((centroids[p][axis] - cbounds.lo[axis]) * scale));
        bins[b].expand(prim_bounds[p]);
        counts[b]++;
      }
      auto right_area  = std::array<double, bvh_bins>{};
      auto right_count = std::array<int, bvh_bins>{};
      auto acc = bbox3{};
      int  cnt = 0;
      for (int b = bvh_bins - 1; b > 0; b--) {
        acc.expand(bins[b]);
        cnt += counts[b];
        right_area[b]  = acc.surface_area();
        right_count[b] = cnt;
      }
      acc = {};
      cnt = 0;
      for (int b = 0; b < bvh_bins - 1; b++) {
        acc.expand(bins[b]);
        cnt += counts[b];
        if (cnt == 0 || right_count[b + 1] == 0) continue;
        double cost = acc.surface_area() * cnt + right_area[b + 1] * right_count[b + 1];
        if (cost < best_cost) {
          best_cost  = cost;
          best_axis  = axis;
          best_split = b;
        }
      }
    }

    int mid = -1;
    if (best_axis >= 0) {
      double leaf_cost = bounds.surface_area() * count;
      if (best_cost >= leaf_cost && count <= 2 * bvh_max_leaf) {
        make_leaf();
        continue;
      }
      double scale = bvh_bins / ext[best_axis];
      auto   first = tree.primitives.begin() + start, last = tree.primitives.begin() + end;
      mid = int(std::stable_partition(first, last, [&](int p) {
        int b = std::min(bvh_bins - 1,
            int((centroids[p][best_axis] - cbounds.lo[best_axis]) * scale));
        return b <= best_split;
      }) - tree.primitives.begin());
    }
    if (mid <= start || mid >= end) {
      // All centroids coincide: split by index.
      mid = start + count / 2;
    }

    int left = int(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    tree.nodes[node_id].start = left;
    tree.nodes[node_id].count = 0;
    stack.push_back({left + 1, mid, end});
    stack.push_back({left, start, mid});
  }
  return tree;
}

inline bool intersect_bbox(const bbox3& b, const vec3& o, const vec3& inv_d, double tmin,
    double tmax) {
  for (int a = 0; a < 3; a++) {
    double t0 = (b.lo[a] - o[a]) * inv_d[a];
    double t1 = (b.hi[a] - o[a]) * inv_d[a];
    if (t0 > t1) std::swap(t0, t1);
    // NaN from 0 * inf falls through as "no constraint" via max/min ordering.
    tmin = t0 > tmin ? t0 : tmin;
    tmax = t1 < tmax ? t1 : tmax;
    if (tmin > tmax) return false;
  }
  return true;
}

// Visits leaves front to back-ish; `hit_prim(prim, ray)` may shrink ray.tmax.
// Returns early when `hit_prim` returns true and `any_hit` is set.
template <typename HitPrim>
inline bool traverse_bvh(const bvh_tree& tree, ray3& ray, bool any_hit, HitPrim&& hit_prim) {
  if (tree.nodes.empty()) return false;
  auto inv_d = vec3{1 / ray.d.x, 1 / ray.d.y, 1 / ray.d.z};
  int  stack[128];
  int  top   = 0;
  stack[top++] = 0;
  bool found = false;
  while (top > 0) {
    const auto& node = tree.nodes[stack[--top]];
    if (!intersect_bbox(node.bounds, ray.o, inv_d, ray.tmin, ray.tmax)) continue;
    if (node.count > 0) {
      for (int i = node.start; i < node.start + node.count; i++) {
        if (hit_prim(tree.primitives[i], ray)) {
          found = true;
          if (any_hit) return true;
        }
      }
    } else {
      stack[top++] = node.start + 1;
      stack[top++] = node.start;
    }
  }
  return found;
}

}  // namespace roomgt
