#pragma once

// Camera poses along the walls of a room, scored by how much geometry they
// see: summed normal-map gradients plus 0.3 * sum ln(depth + 1).

#include <algorithm>
#include <numeric>
#include <vector>

#include "integrator.hpp"
#include "polygon.hpp"

namespace roomgt {

struct view_candidate {
  camera pose;
  image  depth;    // 1 channel, meters
  image  normal;   // 3 channels
  double score = 0;
};

inline constexpr double view_depth_weight = 0.3;

// Sum over pixels and channels of |forward x difference| + |forward y
// difference|; the last column/row differences against itself (zero).
inline double normal_gradient_sum(const image& normals) {
  double total = 0;
  for (int y = 0; y < normals.height; y++) {
    for (int x = 0; x < normals.width; x++) {
      int xn = std::min(x + 1, normals.width - 1), yn = std::min(y + 1, normals.height - 1);
      for (int c = 0; c < normals.channels; c++) {
        double v = normals.at(x, y, c);
        total += std::abs(double(normals.at(xn, y, c)) - v) + std::abs(double(normals.at(x, yn, c)) - v);
      }
    }
  }
  return total;
}

inline double score_view(const image& depth, const image& normals) {
  double log_depth = 0;
  for (auto d : depth.data) log_depth += std::log(double(d) + 1);
  return normal_gradient_sum(normals) + view_depth_weight * log_depth;
}

inline double score_view(const view_candidate& view) { return score_view(view.depth, view.normal); }

struct wall_view_options {
  double spacing       = 0.5;
  double camera_height = 1.5;  // above the floor
  double inset         = 0.3;
  double fov           = 60;   // vertical, degrees
  int    width         = 160;
  int    height        = 120;
};

// Positions every `spacing` meters along each wall (centered on the wall),
// moved `inset` inward, all looking at the polygon centroid at camera height.
// Positions that fall outside the polygon are dropped.
inline std::vector<camera> sample_wall_views(const layout_polygon& layout,
    const wall_view_options& opts = {}) {
  validate_polygon(layout.vertices);
  if (!(opts.spacing > 0)) throw error("view spacing must be > 0");
  auto   poly   = make_ccw(layout.vertices);
  auto   center = centroid(poly);
  double z      = layout.floor_z + opts.camera_height;
  auto   views  = std::vector<camera>{};
  for (size_t w = 0; w < poly.size(); w++) {
    auto   a = poly[w], b = poly[(w + 1) % poly.size()];
    double len   = distance(a, b);
    int    count = int(std::floor(len / opts.spacing + 1e-9));
    if (count == 0) continue;
    double first = (len - count * opts.spacing) / 2 + opts.spacing / 2;
    auto   dir   = normalize(b - a);
    auto   nrm   = inward_normal(poly, w);
    for (int k = 0; k < count; k++) {
      auto p = a + dir * (first + k * opts.spacing) + nrm * opts.inset;
      if (!point_in_polygon(poly, p) || distance(p, center) < 1e-9) continue;
      views.push_back(look_at({p.x, p.y, z}, {center.x, center.y, z}, world_up, opts.fov,
          opts.width, opts.height));
    }
  }
  return views;
}

// Depth and normal maps at the candidate's resolution, then its score.
inline view_candidate evaluate_view(const scene& scn, const camera& pose) {
  auto view   = view_candidate{pose, image(pose.width, pose.height, 1), image(pose.width, pose.height, 3), 0};
  for (int y = 0; y < pose.height; y++) {
    for (int x = 0; x < pose.width; x++) {
      auto g = gbuffer_at(scn, pose, x + 0.5, y + 0.5);
      view.depth.at(x, y) = float(g.depth);
      view.normal.set_rgb(x, y, g.normal);
    }
  }
  view.score = score_view(view);
  return view;
}

// Top-k by score, descending; equal scores keep candidate order.
inline std::vector<view_candidate> rank_views(std::vector<view_candidate> candidates, int k) {
  if (candidates.empty()) throw error("no view candidates to rank");
  if (k < 1) throw error("k must be >= 1");
  std::stable_sort(candidates.begin(), candidates.end(),
      [](const view_candidate& a, const view_candidate& b) { return a.score > b.score; });
  if (int(candidates.size()) > k) candidates.resize(k);
  return candidates;
}

inline std::vector<view_candidate> rank_views(const scene& scn, const std::vector<camera>& poses,
    int k, int threads = 0) {
  if (poses.empty()) throw error("no view candidates to rank");
  auto views = std::vector<view_candidate>(poses.size());
  parallel_for(int(poses.size()), resolve_threads(threads),
      [&](int i) { views[i] = evaluate_view(scn, poses[i]); });
  return rank_views(std::move(views), k);
}

}  // namespace roomgt
