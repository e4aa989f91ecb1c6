#pragma once

// Floor-plane polygons: the room outline shared by layout fitting, view
// sampling and furniture placement.

#include <vector>

#include "error.hpp"
#include "math.hpp"

namespace roomgt {

struct layout_polygon {
  std::vector<vec2> vertices;  // counter-clockwise, meters
  double            floor_z = 0;
  double            height  = 3;
};

inline double signed_area(const std::vector<vec2>& poly) {
  double a = 0;
  for (size_t i = 0; i < poly.size(); i++) {
    auto p = poly[i], q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return a / 2;
}

inline vec2 centroid(const std::vector<vec2>& poly) {
  double a = 0, cx = 0, cy = 0;
  for (size_t i = 0; i < poly.size(); i++) {
    auto   p = poly[i], q = poly[(i + 1) % poly.size()];
    double c = p.x * q.y - q.x * p.y;
    a += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  if (a == 0) throw error("centroid of a degenerate polygon");
  return {cx / (3 * a), cy / (3 * a)};
}

// Even-odd rule; points exactly on an edge may go either way.
inline bool point_in_polygon(const std::vector<vec2>& poly, vec2 p) {
  bool inside = false;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    auto a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      inside = !inside;
  }
  return inside;
}

inline double point_segment_distance(vec2 p, vec2 a, vec2 b) {
  auto   ab = b - a;
  double l2 = dot(ab, ab);
  double t  = l2 > 0 ? std::clamp(dot(p - a, ab) / l2, 0.0, 1.0) : 0.0;
  return length(p - (a + ab * t));
}

// Throws unless the polygon has at least 3 vertices and nonzero area.
inline void validate_polygon(const std::vector<vec2>& poly) {
  if (poly.size() < 3) throw error("polygon needs at least 3 vertices");
  for (auto& v : poly)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw error("polygon vertex is not finite");
  if (std::abs(signed_area(poly)) < 1e-12) throw error("polygon is degenerate (zero area)");
}

inline std::vector<vec2> make_ccw(std::vector<vec2> poly) {
  if (signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());
  return poly;
}

// Unit normal of edge i pointing into a counter-clockwise polygon.
inline vec2 inward_normal(const std::vector<vec2>& poly, size_t i) {
  auto d = normalize(poly[(i + 1) % poly.size()] - poly[i]);
  return {-d.y, d.x};
}

}  // namespace roomgt
