#pragma once

// Room layout from a fused point cloud: RANSAC floor plane, top-down
// occupancy, outline polygon, door/window openings on walls, furniture
// placement cleanup, and layout evaluation metrics.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "error.hpp"
#include "image.hpp"
#include "polygon.hpp"
#include "rng.hpp"

namespace roomgt {

inline constexpr int label_none   = 0;
inline constexpr int label_door   = 1;
inline constexpr int label_window = 2;

struct point_cloud {
  std::vector<vec3> points;
  std::vector<int>  labels;  // empty, or one per point
};

// ASCII, one point per line: `x y z [label]`. Blank lines and `#` comments
// are skipped.
inline point_cloud parse_point_cloud(std::istream& in, const std::string& name = "cloud") {
  auto cloud       = point_cloud{};
  auto line        = std::string{};
  int  line_number = 0;
  bool any_label   = false;
  while (std::getline(in, line)) {
    line_number++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto ss = std::istringstream{line};
    auto p  = vec3{};
    if (!(ss >> p.x)) continue;
    auto where = name + ":" + std::to_string(line_number);
    if (!(ss >> p.y >> p.z)) throw parse_error(where, "expected 'x y z [label]'");
    if (!isfinite(p)) throw parse_error(where, "non-finite coordinate");
    int label = 0;
    if (ss >> label) any_label = true;
    ss.clear();
    auto rest = std::string{};
    if (ss >> rest) throw parse_error(where, "unexpected token '" + rest + "'");
    cloud.points.push_back(p);
    cloud.labels.push_back(label);
  }
  if (!any_label) cloud.labels.clear();
  return cloud;
}

inline point_cloud read_point_cloud(const std::filesystem::path& path) {
  auto in = std::ifstream(path);
  if (!in) throw io_error("cannot open " + path.string());
  return parse_point_cloud(in, path.string());
}

// -----------------------------------------------------------------------------
// Floor plane
// -----------------------------------------------------------------------------

// Points p with dot(normal, p) = offset; the normal points up.
struct plane3 {
  vec3   normal = world_up;
  double offset = 0;

  double distance(vec3 p) const { return dot(normal, p) - offset; }
};

inline constexpr double max_floor_tilt_deg = 10;

// Least-squares plane through points (smallest principal axis).
inline std::optional<plane3> fit_plane_least_squares(const std::vector<vec3>& points) {
  if (points.size() < 3) return std::nullopt;
  auto mean = vec3{};
  for (auto& p : points) mean += p;
  mean = mean / double(points.size());
  auto cov = Eigen::Matrix3d::Zero().eval();
  for (auto& p : points) {
    auto d = Eigen::Vector3d{p.x - mean.x, p.y - mean.y, p.z - mean.z};
    cov += d * d.transpose();
  }
  auto solver = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(cov);
  if (solver.info() != Eigen::Success) return std::nullopt;
  auto e = solver.eigenvectors().col(0);
  auto n = normalize(vec3{e.x(), e.y(), e.z()});
  if (n.z < 0) n = -n;
  return plane3{n, dot(n, mean)};
}

inline plane3 fit_floor_plane(const point_cloud& cloud, double threshold = 0.02,
    int iterations = 1000, uint64_t seed = 0) {
  auto& pts = cloud.points;
  if (pts.size() < 3) throw error("floor fitting needs at least 3 points");
  if (!(threshold > 0)) throw error("RANSAC threshold must be > 0");
  if (iterations < 1) throw error("RANSAC iterations must be >= 1");
  double min_up = std::cos(radians(max_floor_tilt_deg));
  auto   n      = pts.size();

  auto   best       = std::optional<plane3>{};
  size_t best_count = 0;
  for (int it = 0; it < iterations; it++) {
    auto rng = sampler(seed, 0, uint64_t(it), 0);
    auto i   = size_t(rng.next1() * n);
    auto j   = size_t(rng.next1() * (n - 1));
    auto k   = size_t(rng.next1() * (n - 2));
    // Three distinct indices.
    if (j >= i) j++;
    auto lo = std::min(i, j), hi = std::max(i, j);
    if (k >= lo) k++;
    if (k >= hi) k++;
    auto normal = cross(pts[j] - pts[i], pts[k] - pts[i]);
    if (length(normal) < 1e-12) continue;
    normal = normalize(normal);
    if (normal.z < 0) normal = -normal;
    if (normal.z < min_up) continue;
    auto   candidate = plane3{normal, dot(normal, pts[i])};
    size_t count     = 0;
    for (auto& p : pts)
      if (std::abs(candidate.distance(p)) <= threshold) count++;
    if (count > best_count) {
      best_count = count;
      best       = candidate;
    }
  }
  if (!best) throw error("no floor plane within " + std::to_string(int(max_floor_tilt_deg)) +
                         " degrees of vertical up");

  auto inliers = std::vector<vec3>{};
  for (auto& p : pts)
    if (std::abs(best->distance(p)) <= threshold) inliers.push_back(p);
  auto refit = fit_plane_least_squares(inliers);
  if (!refit || refit->normal.z < min_up) return *best;
  return *refit;
}

// -----------------------------------------------------------------------------
// Top-down occupancy
// -----------------------------------------------------------------------------

// In-plane axes: world x and y projected onto the plane.
inline frame3 plane_frame(const plane3& plane) {
  auto n = plane.normal;
  auto u = vec3{1, 0, 0} - n * n.x;
  if (length(u) < 1e-6) u = vec3{0, 1, 0} - n * n.y;
  u = normalize(u);
  return {u, cross(n, u), n};
}

// Cells are centered on the cloud's bounding rectangle corners, so the grid
// covers [min - cell/2, max + cell/2] per axis.
struct occupancy_grid {
  int                  width = 0, height = 0;
  double               cell  = 0;
  vec2                 origin;  // plane coordinates of cell (0,0)'s lower corner
  frame3               frame;
  std::vector<uint8_t> cells;

  bool occupied(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height && cells[size_t(y) * width + x];
  }
  vec2 corner(int x, int y) const { return origin + vec2{x * cell, y * cell}; }
};

inline occupancy_grid project_topdown(const point_cloud& cloud, const plane3& plane, double cell) {
  if (!(cell > 0)) throw error("cell size must be > 0");
  auto grid  = occupancy_grid{};
  grid.cell  = cell;
  grid.frame = plane_frame(plane);
  if (cloud.points.empty()) return grid;
  auto coords = std::vector<vec2>{};
  auto lo = vec2{infinity, infinity}, hi = vec2{-infinity, -infinity};
  for (auto& p : cloud.points) {
    auto c = vec2{dot(p, grid.frame.x), dot(p, grid.frame.y)};
    coords.push_back(c);
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
  }
  grid.origin = lo - vec2{cell / 2, cell / 2};
  auto cells_for = [&](double extent) {
    return std::max(1, int(std::ceil(extent / cell + 1 - 1e-9)));
  };
  grid.width  = cells_for(hi.x - lo.x);
  grid.height = cells_for(hi.y - lo.y);
  grid.cells.assign(size_t(grid.width) * grid.height, 0);
  for (auto c : coords) {
    int x = std::clamp(int(std::floor((c.x - grid.origin.x) / cell)), 0, grid.width - 1);
    int y = std::clamp(int(std::floor((c.y - grid.origin.y) / cell)), 0, grid.height - 1);
    grid.cells[size_t(y) * grid.width + x] = 1;
  }
  return grid;
}

// -----------------------------------------------------------------------------
// Outline polygon
// -----------------------------------------------------------------------------

namespace detail {

inline std::vector<vec2> douglas_peucker(const std::vector<vec2>& pts, double tolerance) {
  if (pts.size() < 3) return pts;
  auto keep  = std::vector<bool>(pts.size(), false);
  keep.front() = keep.back() = true;
  auto stack = std::vector<std::pair<size_t, size_t>>{{0, pts.size() - 1}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    double worst = -1;
    size_t index = 0;
    for (size_t i = a + 1; i < b; i++) {
      double d = point_segment_distance(pts[i], pts[a], pts[b]);
      if (d > worst) {
        worst = d;
        index = i;
      }
    }
    if (worst > tolerance) {
      keep[index] = true;
      stack.push_back({a, index});
      stack.push_back({index, b});
    }
  }
  auto out = std::vector<vec2>{};
  for (size_t i = 0; i < pts.size(); i++)
    if (keep[i]) out.push_back(pts[i]);
  return out;
}

inline std::vector<vec2> simplify_closed(const std::vector<vec2>& loop, double tolerance) {
  if (loop.size() <= 4) return loop;
  size_t far = 0;
  for (size_t i = 1; i < loop.size(); i++)
    if (distance(loop[i], loop[0]) > distance(loop[far], loop[0])) far = i;
  auto first  = std::vector<vec2>(loop.begin(), loop.begin() + far + 1);
  auto second = std::vector<vec2>(loop.begin() + far, loop.end());
  second.push_back(loop[0]);
  auto a = douglas_peucker(first, tolerance);
  auto b = douglas_peucker(second, tolerance);
  a.pop_back();
  b.pop_back();
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Edges within `max_deg` of an axis become exactly axis-aligned.
inline void snap_to_axes(std::vector<vec2>& poly, double max_deg) {
  double tol = std::tan(radians(max_deg));
  for (size_t i = 0; i < poly.size(); i++) {
    auto& a = poly[i];
    auto& b = poly[(i + 1) % poly.size()];
    auto  d = b - a;
    if (std::abs(d.x) > 0 && std::abs(d.y) < tol * std::abs(d.x)) {
      a.y = b.y = (a.y + b.y) / 2;
    } else if (std::abs(d.y) > 0 && std::abs(d.x) < tol * std::abs(d.y)) {
      a.x = b.x = (a.x + b.x) / 2;
    }
  }
}

inline void drop_collinear(std::vector<vec2>& poly) {
  bool changed = true;
  while (changed && poly.size() > 3) {
    changed = false;
    for (size_t i = 0; i < poly.size(); i++) {
      auto p = poly[(i + poly.size() - 1) % poly.size()], q = poly[i],
           r = poly[(i + 1) % poly.size()];
      if (std::abs(cross(q - p, r - q)) < 1e-12 || q == r) {
        poly.erase(poly.begin() + i);
        changed = true;
        break;
      }
    }
  }
}

}  // namespace detail

// Largest 4-connected occupied region, its outer boundary traced along cell
// edges, simplified (tolerance 2 cells) and snapped to axes (< 5 degrees).
inline layout_polygon polygonize(const occupancy_grid& grid, double floor_z = 0,
    double height = 3) {
  int w = grid.width, h = grid.height;
  auto label = std::vector<int>(size_t(w) * h, -1);
  int  best = -1, best_size = 0, count = 0;
  for (int y = 0; y < h; y++) {
    for (int x = 0; x < w; x++) {
      if (!grid.occupied(x, y) || label[size_t(y) * w + x] >= 0) continue;
      int size  = 0;
      auto todo = std::vector<std::pair<int, int>>{{x, y}};
      label[size_t(y) * w + x] = count;
      while (!todo.empty()) {
        auto [cx, cy] = todo.back();
        todo.pop_back();
        size++;
        for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          int nx = cx + dx, ny = cy + dy;
          if (grid.occupied(nx, ny) && label[size_t(ny) * w + nx] < 0) {
            label[size_t(ny) * w + nx] = count;
            todo.push_back({nx, ny});
          }
        }
      }
      if (size > best_size) {
        best_size = size;
        best      = count;
      }
      count++;
    }
  }
  if (best < 0) throw error("occupancy grid is empty");
  auto in = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h && label[size_t(y) * w + x] == best;
  };

  // Directed boundary edges with the region on the left, keyed by start.
  using corner = std::pair<int, int>;
  auto edges   = std::multimap<corner, corner>{};
  for (int y = 0; y < h; y++) {
    for (int x = 0; x < w; x++) {
      if (!in(x, y)) continue;
      if (!in(x, y - 1)) edges.insert({{x, y}, {x + 1, y}});
      if (!in(x + 1, y)) edges.insert({{x + 1, y}, {x + 1, y + 1}});
      if (!in(x, y + 1)) edges.insert({{x + 1, y + 1}, {x, y + 1}});
      if (!in(x - 1, y)) edges.insert({{x, y + 1}, {x, y}});
    }
  }
  // Chain into loops, preferring left turns at pinch corners.
  auto loops = std::vector<std::vector<corner>>{};
  while (!edges.empty()) {
    auto it    = edges.begin();
    auto start = it->first;
    auto loop  = std::vector<corner>{start};
    auto prev  = start;
    auto cur   = it->second;
    edges.erase(it);
    while (cur != start) {
      loop.push_back(cur);
      auto [lo, hi] = edges.equal_range(cur);
      if (lo == hi) throw error("broken boundary while tracing the outline");
      auto pick = lo;
      if (std::next(lo) != hi) {
        auto din = vec2{double(cur.first - prev.first), double(cur.second - prev.second)};
        for (auto e = lo; e != hi; ++e) {
          auto dout = vec2{double(e->second.first - cur.first), double(e->second.second - cur.second)};
          if (cross(din, dout) > 0) pick = e;
        }
      }
      prev = cur;
      cur  = pick->second;
      edges.erase(pick);
    }
    loops.push_back(std::move(loop));
  }
  auto outline  = std::vector<vec2>{};
  double best_a = -infinity;
  for (auto& loop : loops) {
    auto pts = std::vector<vec2>{};
    for (auto [x, y] : loop) pts.push_back(grid.corner(x, y));
    double a = signed_area(pts);
    if (a > best_a) {
      best_a  = a;
      outline = std::move(pts);
    }
  }
  detail::drop_collinear(outline);
  outline = detail::simplify_closed(outline, 2 * grid.cell);
  detail::snap_to_axes(outline, 5);
  detail::drop_collinear(outline);
  return {make_ccw(std::move(outline)), floor_z, height};
}

// -----------------------------------------------------------------------------
// Openings
// -----------------------------------------------------------------------------

enum class opening_type { door, window };

inline std::string to_string(opening_type t) { return t == opening_type::door ? "door" : "window"; }

struct wall_segment {
  int          wall  = 0;
  double       start = 0, end = 0;  // meters along the wall from its first vertex
  opening_type type  = opening_type::door;
  int          placeholder = 0;     // CAD placeholder id, in output order
};

// Index of the nearest wall to p; exact ties go to the lower index.
inline int nearest_wall(const std::vector<vec2>& poly, vec2 p) {
  int    best = 0;
  double best_d = infinity;
  for (size_t i = 0; i < poly.size(); i++) {
    double d = point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]);
    if (d < best_d) {
      best_d = d;
      best   = int(i);
    }
  }
  return best;
}

inline std::vector<wall_segment> assign_openings(const point_cloud& cloud,
    const layout_polygon& layout, double segment_width = 0.5, int min_points = 20) {
  validate_polygon(layout.vertices);
  if (!(segment_width > 0)) throw error("segment width must be > 0");
  auto& poly = layout.vertices;
  auto  out  = std::vector<wall_segment>{};
  if (cloud.labels.empty()) return out;
  int walls = int(poly.size());
  for (auto type : {opening_type::door, opening_type::window}) {
    int wanted = type == opening_type::door ? label_door : label_window;
    auto bins  = std::vector<std::vector<int>>(walls);
    auto lens  = std::vector<double>(walls);
    for (int w = 0; w < walls; w++) {
      lens[w] = distance(poly[w], poly[(w + 1) % walls]);
      bins[w].assign(std::max(1, int(std::ceil(lens[w] / segment_width - 1e-9))), 0);
    }
    for (size_t i = 0; i < cloud.points.size(); i++) {
      if (cloud.labels[i] != wanted) continue;
      auto p = vec2{cloud.points[i].x, cloud.points[i].y};
      int  w = nearest_wall(poly, p);
      auto a = poly[w], b = poly[(w + 1) % walls];
      double t = std::clamp(dot(p - a, normalize(b - a)), 0.0, lens[w]);
      int bin = std::min(int(bins[w].size()) - 1, int(t / segment_width));
      bins[w][bin]++;
    }
    for (int w = 0; w < walls; w++) {
      int n = int(bins[w].size());
      for (int b = 0; b < n;) {
        if (bins[w][b] < min_points) {
          b++;
          continue;
        }
        int e = b;
        while (e + 1 < n && bins[w][e + 1] >= min_points) e++;
        out.push_back({w, b * segment_width, std::min(lens[w], (e + 1) * segment_width), type, 0});
        b = e + 1;
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const wall_segment& a, const wall_segment& b) {
    return a.wall != b.wall ? a.wall < b.wall : a.start < b.start;
  });
  for (size_t i = 0; i < out.size(); i++) out[i].placeholder = int(i);
  return out;
}

// -----------------------------------------------------------------------------
// Furniture placement
// -----------------------------------------------------------------------------

struct placed_object {
  std::string id;
  vec3        center;
  vec3        half_extents;
  double      yaw = 0;  // radians about +z

  std::array<vec2, 4> footprint() const {
    double c = std::cos(yaw), s = std::sin(yaw);
    auto   ax = vec2{c, s} * half_extents.x, ay = vec2{-s, c} * half_extents.y;
    auto   o  = vec2{center.x, center.y};
    return {o - ax - ay, o + ax - ay, o + ax + ay, o - ax + ay};
  }
};

struct placement_result {
  std::vector<placed_object>       objects;
  std::vector<std::pair<int, int>> overlaps;  // index pairs, i < j, still intersecting
};

namespace detail {

// Separating-axis test for two oriented footprints, touching counts as apart.
inline bool footprints_overlap(const std::array<vec2, 4>& a, const std::array<vec2, 4>& b) {
  for (auto* poly : {&a, &b}) {
    for (int i = 0; i < 4; i++) {
      auto e    = (*poly)[(i + 1) % 4] - (*poly)[i];
      auto axis = vec2{-e.y, e.x};
      double amin = infinity, amax = -infinity, bmin = infinity, bmax = -infinity;
      for (auto p : a) amin = std::min(amin, dot(p, axis)), amax = std::max(amax, dot(p, axis));
      for (auto p : b) bmin = std::min(bmin, dot(p, axis)), bmax = std::max(bmax, dot(p, axis));
      if (amax <= bmin || bmax <= amin) return false;
    }
  }
  return true;
}

}  // namespace detail

inline constexpr double placement_tolerance = 1e-9;

// Rests every box on the floor and pushes it out of walls along the wall's
// inward normal. Object-object intersections are reported, not resolved.
inline placement_result resolve_placement(std::vector<placed_object> objects,
    const layout_polygon& layout) {
  validate_polygon(layout.vertices);
  auto poly = make_ccw(layout.vertices);
  int  n    = int(poly.size());
  for (auto& obj : objects) {
    if (!(obj.half_extents.x > 0 && obj.half_extents.y > 0 && obj.half_extents.z > 0))
      throw error("object '" + obj.id + "' has non-positive half extents");
    if (2 * obj.half_extents.z > layout.height + placement_tolerance)
      throw error("object '" + obj.id + "' is taller than the room");
    for (int w = 0; w < n; w++) {
      auto   nrm  = inward_normal(poly, w);
      double room = 0, box_lo = infinity, box_hi = -infinity;
      for (auto& v : poly) room = std::max(room, dot(v - poly[w], nrm));
      for (auto c : obj.footprint())
        box_lo = std::min(box_lo, dot(c, nrm)), box_hi = std::max(box_hi, dot(c, nrm));
      if (box_hi - box_lo > room + placement_tolerance)
        throw error("object '" + obj.id + "' is larger than the room");
    }

    obj.center.z = layout.floor_z + obj.half_extents.z;
    for (int pass = 0; pass < 64; pass++) {
      bool moved = false;
      for (int w = 0; w < n; w++) {
        auto   a = poly[w], b = poly[(w + 1) % n];
        auto   dir = normalize(b - a);
        double len = distance(a, b);
        auto   nrm = inward_normal(poly, w);
        double depth = 0;
        for (auto c : obj.footprint()) {
          // Corners beyond the wall's ends still count when they are
          // outside the room and this is their nearest wall.
          double along = dot(c - a, dir);
          if ((along < 0 || along > len) &&
              (point_in_polygon(poly, c) || nearest_wall(poly, c) != w))
            continue;
          depth = std::max(depth, -dot(c - a, nrm));
        }
        if (depth > placement_tolerance) {
          obj.center.x += nrm.x * depth;
          obj.center.y += nrm.y * depth;
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  auto result    = placement_result{};
  result.objects = std::move(objects);
  for (int i = 0; i < int(result.objects.size()); i++) {
    for (int j = i + 1; j < int(result.objects.size()); j++) {
      auto& a = result.objects[i];
      auto& b = result.objects[j];
      bool z_overlap = std::abs(a.center.z - b.center.z) < a.half_extents.z + b.half_extents.z;
      if (z_overlap && detail::footprints_overlap(a.footprint(), b.footprint()))
        result.overlaps.push_back({i, j});
    }
  }
  return result;
}

// -----------------------------------------------------------------------------
// Evaluation
// -----------------------------------------------------------------------------

struct layout_metrics {
  double corner_precision = 0, corner_recall = 0;
  double edge_precision = 0, edge_recall = 0;
  double iou = 0;
};

inline constexpr double corner_threshold_px = 10;

// Greedy one-to-one matching by ascending distance. Returns, per predicted
// corner, the matched ground-truth index or -1.
inline std::vector<int> match_corners(const std::vector<vec2>& predicted,
    const std::vector<vec2>& truth, double pixels_per_meter) {
  struct pair_dist {
    double d;
    int    p, g;
  };
  auto pairs = std::vector<pair_dist>{};
  for (int p = 0; p < int(predicted.size()); p++)
    for (int g = 0; g < int(truth.size()); g++) {
      double d = distance(predicted[p] * pixels_per_meter, truth[g] * pixels_per_meter);
      if (d <= corner_threshold_px * (1 + 1e-12)) pairs.push_back({d, p, g});
    }
  std::sort(pairs.begin(), pairs.end(), [](const pair_dist& a, const pair_dist& b) {
    if (a.d != b.d) return a.d < b.d;
    return a.p != b.p ? a.p < b.p : a.g < b.g;
  });
  auto match = std::vector<int>(predicted.size(), -1);
  auto used  = std::vector<bool>(truth.size(), false);
  for (auto& pd : pairs) {
    if (match[pd.p] >= 0 || used[pd.g]) continue;
    match[pd.p] = pd.g;
    used[pd.g]  = true;
  }
  return match;
}

// Pixel-center rasterization over a shared window at `pixels_per_meter`.
inline double polygon_iou(const std::vector<vec2>& a, const std::vector<vec2>& b,
    double pixels_per_meter) {
  if (a.size() < 3 || b.size() < 3) return 0;
  auto lo = vec2{infinity, infinity}, hi = vec2{-infinity, -infinity};
  for (auto* poly : {&a, &b})
    for (auto v : *poly) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
  int x0 = int(std::floor(lo.x * pixels_per_meter)), x1 = int(std::ceil(hi.x * pixels_per_meter));
  int y0 = int(std::floor(lo.y * pixels_per_meter)), y1 = int(std::ceil(hi.y * pixels_per_meter));
  long inter = 0, uni = 0;
  for (int y = y0; y < y1; y++) {
    for (int x = x0; x < x1; x++) {
      auto p  = vec2{(x + 0.5) / pixels_per_meter, (y + 0.5) / pixels_per_meter};
      bool ia = point_in_polygon(a, p), ib = point_in_polygon(b, p);
      inter += ia && ib;
      uni += ia || ib;
    }
  }
  return uni > 0 ? double(inter) / double(uni) : 0.0;
}

inline layout_metrics eval_layout(const layout_polygon& predicted, const layout_polygon& truth,
    double pixels_per_meter) {
  if (!(pixels_per_meter > 0)) throw error("pixel scale must be > 0");
  auto m = layout_metrics{};
  auto& pv = predicted.vertices;
  auto& gv = truth.vertices;
  if (pv.empty() || gv.empty()) return m;

  auto match   = match_corners(pv, gv, pixels_per_meter);
  int  matched = int(std::count_if(match.begin(), match.end(), [](int g) { return g >= 0; }));
  m.corner_precision = double(matched) / pv.size();
  m.corner_recall    = double(matched) / gv.size();

  auto gt_adjacent = [&](int a, int b) {
    int n = int(gv.size());
    return n >= 2 && ((a + 1) % n == b || (b + 1) % n == a);
  };
  int pred_edges = pv.size() >= 3 ? int(pv.size()) : int(pv.size()) - 1;
  int gt_edges   = gv.size() >= 3 ? int(gv.size()) : int(gv.size()) - 1;
  int valid      = 0;
  for (int i = 0; i < pred_edges; i++) {
    int a = match[i], b = match[(i + 1) % pv.size()];
    if (a >= 0 && b >= 0 && a != b && gt_adjacent(a, b)) valid++;
  }
  if (pred_edges > 0) m.edge_precision = double(valid) / pred_edges;
  if (gt_edges > 0) m.edge_recall = double(valid) / gt_edges;
  m.iou = polygon_iou(pv, gv, pixels_per_meter);
  return m;
}

// -----------------------------------------------------------------------------
// JSON
// -----------------------------------------------------------------------------

inline nlohmann::json layout_to_json(const layout_polygon& layout) {
  auto verts = nlohmann::json::array();
  for (auto v : layout.vertices) verts.push_back({v.x, v.y});
  return {{"vertices", verts}, {"floor_z", layout.floor_z}, {"height", layout.height}};
}

inline layout_polygon layout_from_json(const nlohmann::json& j, const std::string& where = "layout") {
  auto layout = layout_polygon{};
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw parse_error(where, "expected {vertices: [[x, y], ...], floor_z, height}");
  for (size_t i = 0; i < j["vertices"].size(); i++) {
    auto& v = j["vertices"][i];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw parse_error(where + ".vertices[" + std::to_string(i) + "]", "expected [x, y]");
    layout.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  if (j.contains("floor_z")) layout.floor_z = j["floor_z"].get<double>();
  if (j.contains("height")) layout.height = j["height"].get<double>();
  return layout;
}

inline layout_polygon read_layout(const std::filesystem::path& path) {
  auto text = read_binary(path);
  try {
    return layout_from_json(nlohmann::json::parse(text), path.string());
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path.string(), e.what());
  }
}

}  // namespace roomgt
