#pragma once

// Window and lamp lights.
//
// A window is a rectangle (parallelogram) whose radiance is an infinitely
// distant equirectangular environment map seen through it; only rays that
// cross the rectangle receive that radiance. A lamp is an oriented box that
// emits black-body colored radiance from every face.
//
// All pdfs returned here are per unit solid angle at the shading point.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "color.hpp"
#include "error.hpp"
#include "image.hpp"
#include "math.hpp"

namespace roomgt {

inline constexpr double lamp_min_kelvin = 4000;
inline constexpr double lamp_max_kelvin = 8000;

// Equirectangular map, +z up: u = phi / 2pi with phi = atan2(y, x),
// v = theta / pi with theta measured from +z. Row 0 is the zenith.
struct environment_map {
  image pixels = image(1, 1, 3, 1.0f);

  static environment_map constant(rgb value) {
    auto env = environment_map{};
    env.pixels.set_rgb(0, 0, value);
    return env;
  }

  rgb eval(vec3 dir) const {
    double phi = std::atan2(dir.y, dir.x);
    if (phi < 0) phi += 2 * pi;
    double theta = std::acos(std::clamp(dir.z, -1.0, 1.0));
    double s = phi / (2 * pi) * pixels.width - 0.5;
    double t = theta / pi * pixels.height - 0.5;
    double sx = std::floor(s), ty = std::floor(t);
    double fx = s - sx, fy = t - ty;
    auto wrap_x = [&](long x) {
      long w = pixels.width;
      return int(((x % w) + w) % w);
    };
    auto clamp_y = [&](long y) { return int(std::clamp(y, 0L, long(pixels.height - 1))); };
    int x0 = wrap_x(long(sx)), x1 = wrap_x(long(sx) + 1);
    int y0 = clamp_y(long(ty)), y1 = clamp_y(long(ty) + 1);
    return pixels.rgb_at(x0, y0) * ((1 - fx) * (1 - fy)) +
           pixels.rgb_at(x1, y0) * (fx * (1 - fy)) +
           pixels.rgb_at(x0, y1) * ((1 - fx) * fy) + pixels.rgb_at(x1, y1) * (fx * fy);
  }
};

struct window_light {
  vec3            corner    = {};
  vec3            edge_u    = {1, 0, 0};
  vec3            edge_v    = {0, 1, 0};
  environment_map env       = {};
  double          intensity = 1;

  vec3   normal() const { return normalize(cross(edge_u, edge_v)); }
  double area() const { return length(cross(edge_u, edge_v)); }
  vec3   center() const { return corner + (edge_u + edge_v) * 0.5; }
  rgb    radiance(vec3 dir) const { return env.eval(dir) * intensity; }
};

struct lamp_light {
  vec3   center       = {};
  vec3   half_extents = {0.1, 0.1, 0.1};
  frame3 axes         = {};  // box orientation; local x, y, z in world space
  double temperature  = 6500;
  double intensity    = 1;
  rgb    emission     = {1, 1, 1};  // blackbody_rgb(temperature) * intensity
};

using light = std::variant<window_light, lamp_light>;

inline bool is_window(const light& l) { return std::holds_alternative<window_light>(l); }
inline bool is_lamp(const light& l) { return std::holds_alternative<lamp_light>(l); }

inline lamp_light make_lamp_light(vec3 center, vec3 half_extents, double temperature,
    double intensity, frame3 axes = {}) {
  if (!(half_extents.x > 0 && half_extents.y > 0 && half_extents.z > 0))
    throw error("lamp half-extents must be positive");
  if (!(temperature >= lamp_min_kelvin && temperature <= lamp_max_kelvin))
    throw error("lamp temperature must be in [4000, 8000] K, got " +
                std::to_string(temperature));
  if (!(intensity >= 0)) throw error("lamp intensity must be >= 0");
  auto lamp = lamp_light{center, half_extents, axes, temperature, intensity, {}};
  lamp.emission = blackbody_rgb(temperature) * intensity;
  return lamp;
}

inline window_light make_window_light(vec3 corner, vec3 edge_u, vec3 edge_v,
    environment_map env, double intensity) {
  if (length(cross(edge_u, edge_v)) <= 1e-12 * std::max(1.0, length(edge_u) * length(edge_v)))
    throw error("window edges must be nonzero and non-parallel");
  if (!(intensity >= 0)) throw error("window intensity must be >= 0");
  for (auto v : env.pixels.data)
    if (!std::isfinite(v) || v < 0)
      throw error("window environment map must be finite and non-negative");
  return {corner, edge_u, edge_v, std::move(env), intensity};
}

struct light_sample {
  vec3   direction = {};        // unit, from the shading point
  double distance  = 0;         // to `point`; windows are backed by the env at infinity
  vec3   point     = {};        // sampled point on the light geometry
  rgb    radiance  = {};
  double pdf       = 0;         // solid angle; 0 marks an unusable sample
  int    light_id  = -1;
  bool   at_infinity = false;   // window samples: visibility is "ray escapes"
};

// -----------------------------------------------------------------------------
// Geometry helpers
// -----------------------------------------------------------------------------

// Ray / parallelogram crossing. Returns t > tmin or nothing.
inline std::optional<double> intersect_window(const window_light& w, const ray3& ray) {
  auto n     = cross(w.edge_u, w.edge_v);
  auto denom = dot(n, ray.d);
  if (denom == 0) return std::nullopt;
  auto t = dot(n, w.corner - ray.o) / denom;
  if (!(t > ray.tmin && t < ray.tmax)) return std::nullopt;
  auto q   = ray.at(t) - w.corner;
  // Solve q = a edge_u + b edge_v in the plane.
  auto uu = dot(w.edge_u, w.edge_u), uv = dot(w.edge_u, w.edge_v),
       vv = dot(w.edge_v, w.edge_v);
  auto qu = dot(q, w.edge_u), qv = dot(q, w.edge_v);
  auto det = uu * vv - uv * uv;
  auto a   = (qu * vv - qv * uv) / det;
  auto b   = (qv * uu - qu * uv) / det;
  if (a < 0 || a > 1 || b < 0 || b > 1) return std::nullopt;
  return t;
}

struct box_hit {
  double t    = 0;
  int    face = -1;  // 2 * axis + (positive side ? 1 : 0)
};

// Nearest crossing of the box boundary with t in (tmin, tmax). From inside,
// that is the exit point.
inline std::optional<box_hit> intersect_box(const lamp_light& lamp, const ray3& ray) {
  auto o = lamp.axes.to_local(ray.o - lamp.center);
  auto d = lamp.axes.to_local(ray.d);
  double t0 = -infinity, t1 = infinity;
  int    f0 = -1, f1 = -1;
  for (int a = 0; a < 3; a++) {
    double h = lamp.half_extents[a];
    if (d[a] == 0) {
      if (o[a] < -h || o[a] > h) return std::nullopt;
      continue;
    }
    double inv = 1 / d[a];
    double ta  = (-h - o[a]) * inv, tb = (h - o[a]) * inv;
    int    fa = 2 * a, fb = 2 * a + 1;
    if (ta > tb) {
      std::swap(ta, tb);
      std::swap(fa, fb);
    }
    if (ta > t0) t0 = ta, f0 = fa;
    if (tb < t1) t1 = tb, f1 = fb;
    if (t0 > t1) return std::nullopt;
  }
  if (t0 > ray.tmin && t0 < ray.tmax) return box_hit{t0, f0};
  if (t1 > ray.tmin && t1 < ray.tmax) return box_hit{t1, f1};
  return std::nullopt;
}

inline bool inside_box(const lamp_light& lamp, vec3 p) {
  auto q = lamp.axes.to_local(p - lamp.center);
  return std::abs(q.x) <= lamp.half_extents.x && std::abs(q.y) <= lamp.half_extents.y &&
         std::abs(q.z) <= lamp.half_extents.z;
}

struct box_face {
  vec3   center, normal, axis_a, axis_b;  // axis_* scaled by half sizes
  double area = 0;
};

inline box_face lamp_face(const lamp_light& lamp, int face) {
  int    a    = face / 2;
  double sign = (face % 2) ? 1.0 : -1.0;
  int    b = (a + 1) % 3, c = (a + 2) % 3;
  auto   axis = [&](int k) { return k == 0 ? lamp.axes.x : (k == 1 ? lamp.axes.y : lamp.axes.z); };
  auto   f    = box_face{};
  f.normal    = axis(a) * sign;
  f.center    = lamp.center + f.normal * lamp.half_extents[a];
  f.axis_a    = axis(b) * lamp.half_extents[b];
  f.axis_b    = axis(c) * lamp.half_extents[c];
  f.area      = 4 * lamp.half_extents[b] * lamp.half_extents[c];
  return f;
}

// Faces whose outward side faces `p`, with their total area.
inline std::pair<std::array<int, 6>, int> visible_faces(
    const lamp_light& lamp, vec3 p, double* total_area = nullptr) {
  auto faces = std::array<int, 6>{};
  int  count = 0;
  double area = 0;
  auto q = lamp.axes.to_local(p - lamp.center);
  for (int face = 0; face < 6; face++) {
    int    a    = face / 2;
    double sign = (face % 2) ? 1.0 : -1.0;
    if (sign * q[a] > lamp.half_extents[a]) {
      faces[count++] = face;
      area += lamp_face(lamp, face).area;
    }
  }
  if (total_area) *total_area = area;
  return {faces, count};
}

// -----------------------------------------------------------------------------
// Sampling
// -----------------------------------------------------------------------------

inline light_sample sample_lamp(const lamp_light& lamp, vec3 p, std::array<double, 3> u) {
  double total_area = 0;
  auto [faces, count] = visible_faces(lamp, p, &total_area);
  if (count == 0 || total_area <= 0) return {};
  // Pick a face proportionally to its area.
  double target = u[0] * total_area, acc = 0;
  int    chosen = faces[count - 1];
  for (int i = 0; i < count; i++) {
    acc += lamp_face(lamp, faces[i]).area;
    if (target < acc) {
      chosen = faces[i];
      break;
    }
  }
  auto face  = lamp_face(lamp, chosen);
  auto point = face.center + face.axis_a * (2 * u[1] - 1) + face.axis_b * (2 * u[2] - 1);
  auto delta = point - p;
  auto dist  = length(delta);
  if (dist <= 0) return {};
  auto   dir   = delta / dist;
  double cos_l = std::abs(dot(face.normal, dir));
  if (cos_l <= 0) return {};
  auto s      = light_sample{};
  s.direction = dir;
  s.distance  = dist;
  s.point     = point;
  s.radiance  = lamp.emission;
  s.pdf       = dist * dist / (total_area * cos_l);
  return s;
}

inline light_sample sample_window(const window_light& w, vec3 p, std::array<double, 3> u) {
  auto point = w.corner + w.edge_u * u[1] + w.edge_v * u[2];
  auto delta = point - p;
  auto dist  = length(delta);
  if (dist <= 0) return {};
  auto   dir   = delta / dist;
  double cos_l = std::abs(dot(w.normal(), dir));
  if (cos_l <= 0) return {};
  auto s        = light_sample{};
  s.direction   = dir;
  s.distance    = dist;
  s.point       = point;
  s.radiance    = w.radiance(dir);
  s.pdf         = dist * dist / (w.area() * cos_l);
  s.at_infinity = true;
  return s;
}

// u[0] picks the lamp face; u[1], u[2] place the point. A point on (or
// inside) the light yields a zero-pdf sample.
inline light_sample sample_light(const light& l, vec3 p, std::array<double, 3> u) {
  return std::visit(
      [&](const auto& shape) {
        if constexpr (std::is_same_v<std::decay_t<decltype(shape)>, lamp_light>)
          return sample_lamp(shape, p, u);
        else
          return sample_window(shape, p, u);
      },
      l);
}

inline double pdf_light(const light& l, vec3 p, vec3 dir) {
  auto ray = ray3{p, dir, 0, infinity};
  if (auto* lamp = std::get_if<lamp_light>(&l)) {
    if (inside_box(*lamp, p)) return 0;
    auto hit = intersect_box(*lamp, ray);
    if (!hit) return 0;
    double total_area = 0;
    visible_faces(*lamp, p, &total_area);
    if (total_area <= 0) return 0;
    double cos_l = std::abs(dot(lamp_face(*lamp, hit->face).normal, dir));
    if (cos_l <= 0) return 0;
    return hit->t * hit->t / (total_area * cos_l);
  }
  auto& w = std::get<window_light>(l);
  auto  t = intersect_window(w, ray);
  if (!t) return 0;
  double cos_l = std::abs(dot(w.normal(), dir));
  if (cos_l <= 0) return 0;
  return (*t) * (*t) / (w.area() * cos_l);
}

// Radiance reaching the origin of an escaping ray: the sum over windows the
// ray crosses of the environment radiance along the ray direction. With a
// filter, only that light id contributes (other windows read as closed).
inline rgb envmap_through_window(const std::vector<light>& lights, const ray3& ray,
    std::optional<int> light_filter = std::nullopt) {
  auto total = rgb{};
  for (int id = 0; id < int(lights.size()); id++) {
    if (light_filter && *light_filter != id) continue;
    auto* w = std::get_if<window_light>(&lights[id]);
    if (!w) continue;
    if (intersect_window(*w, ray)) total += w->radiance(ray.d);
  }
  return total;
}

}  // namespace roomgt
