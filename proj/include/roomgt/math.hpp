#pragma once

// Small vector math used across the toolkit. Everything is double precision;
// float32 only appears at the image I/O boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace roomgt {

inline constexpr double pi     = std::numbers::pi;
inline constexpr double inv_pi = 1.0 / std::numbers::pi;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct vec2 {
  double x = 0, y = 0;

  constexpr double&       operator[](int i) { return i == 0 ? x : y; }
  constexpr const double& operator[](int i) const { return i == 0 ? x : y; }
  friend constexpr bool   operator==(const vec2&, const vec2&) = default;
};

struct vec3 {
  double x = 0, y = 0, z = 0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr const double& operator[](int i) const {
    return i == 0 ? x : (i == 1 ? y : z);
  }
  friend constexpr bool operator==(const vec3&, const vec3&) = default;
};

struct vec3i {
  int  x = 0, y = 0, z = 0;
  constexpr int&       operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr const int& operator[](int i) const {
    return i == 0 ? x : (i == 1 ? y : z);
  }
  friend constexpr bool operator==(const vec3i&, const vec3i&) = default;
};

// Linear RGB radiance / reflectance triple.
using rgb = vec3;

// vec2
constexpr vec2 operator+(vec2 a, vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr vec2 operator-(vec2 a, vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr vec2 operator-(vec2 a) { return {-a.x, -a.y}; }
constexpr vec2 operator*(vec2 a, double s) { return {a.x * s, a.y * s}; }
constexpr vec2 operator*(double s, vec2 a) { return {a.x * s, a.y * s}; }
constexpr vec2 operator/(vec2 a, double s) { return {a.x / s, a.y / s}; }
constexpr double dot(vec2 a, vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(vec2 a, vec2 b) { return a.x * b.y - a.y * b.x; }
inline double    length(vec2 a) { return std::sqrt(dot(a, a)); }
inline vec2      normalize(vec2 a) {
  auto l = length(a);
  return l > 0 ? a / l : a;
}
inline double distance(vec2 a, vec2 b) { return length(a - b); }

// vec3
constexpr vec3 operator+(vec3 a, vec3 b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
constexpr vec3 operator-(vec3 a, vec3 b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
constexpr vec3 operator-(vec3 a) { return {-a.x, -a.y, -a.z}; }
constexpr vec3 operator*(vec3 a, vec3 b) {
  return {a.x * b.x, a.y * b.y, a.z * b.z};
}
constexpr vec3 operator*(vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
constexpr vec3 operator*(double s, vec3 a) { return {a.x * s, a.y * s, a.z * s}; }
constexpr vec3 operator/(vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
constexpr vec3 operator/(vec3 a, vec3 b) {
  return {a.x / b.x, a.y / b.y, a.z / b.z};
}
constexpr vec3& operator+=(vec3& a, vec3 b) { return a = a + b; }
constexpr vec3& operator-=(vec3& a, vec3 b) { return a = a - b; }
constexpr vec3& operator*=(vec3& a, vec3 b) { return a = a * b; }
constexpr vec3& operator*=(vec3& a, double s) { return a = a * s; }
constexpr vec3& operator/=(vec3& a, double s) { return a = a / s; }

constexpr double dot(vec3 a, vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr vec3   cross(vec3 a, vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(vec3 a) { return std::sqrt(dot(a, a)); }
inline double length_squared(vec3 a) { return dot(a, a); }
inline vec3   normalize(vec3 a) {
  auto l = length(a);
  return l > 0 ? a / l : a;
}
inline double distance(vec3 a, vec3 b) { return length(a - b); }

constexpr vec3 min(vec3 a, vec3 b) {
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
constexpr vec3 max(vec3 a, vec3 b) {
  return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}
constexpr double max_component(vec3 a) { return std::max({a.x, a.y, a.z}); }
constexpr double min_component(vec3 a) { return std::min({a.x, a.y, a.z}); }
constexpr double sum(vec3 a) { return a.x + a.y + a.z; }
constexpr double mean(vec3 a) { return (a.x + a.y + a.z) / 3; }
constexpr vec3   clamp(vec3 a, double lo, double hi) {
  return {std::clamp(a.x, lo, hi), std::clamp(a.y, lo, hi),
      std::clamp(a.z, lo, hi)};
}
inline bool isfinite(vec3 a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}
constexpr bool is_zero(vec3 a) { return a.x == 0 && a.y == 0 && a.z == 0; }

inline constexpr vec3 world_up = {0, 0, 1};

// Orthonormal frame. Local coordinates have z along the normal.
struct frame3 {
  vec3 x = {1, 0, 0}, y = {0, 1, 0}, z = {0, 0, 1};

  vec3 to_local(vec3 v) const { return {dot(v, x), dot(v, y), dot(v, z)}; }
  vec3 to_world(vec3 v) const { return x * v.x + y * v.y + z * v.z; }
};

// Branchless basis construction (Duff et al. 2017). Deterministic in n, which
// matters because per-pixel environment maps are stored in this frame.
inline frame3 basis_from_z(vec3 n) {
  double sign = std::copysign(1.0, n.z);
  double a    = -1.0 / (sign + n.z);
  double b    = n.x * n.y * a;
  vec3   t    = {1 + sign * n.x * n.x * a, sign * b, -sign * n.x};
  vec3   s    = {b, sign + n.y * n.y * a, -n.y};
  return {t, s, n};
}

struct ray3 {
  vec3   o;
  vec3   d;
  double tmin = 0;
  double tmax = infinity;

  vec3 at(double t) const { return o + d * t; }
};

struct bbox3 {
  vec3 lo = {infinity, infinity, infinity};
  vec3 hi = {-infinity, -infinity, -infinity};

  void expand(vec3 p) {
    lo = min(lo, p);
    hi = max(hi, p);
  }
  void expand(const bbox3& b) {
    lo = min(lo, b.lo);
    hi = max(hi, b.hi);
  }
  bool   empty() const { return lo.x > hi.x; }
  vec3   extent() const { return empty() ? vec3{} : hi - lo; }
  vec3   center() const { return (lo + hi) * 0.5; }
  double surface_area() const {
    if (empty()) return 0;
    auto e = hi - lo;
    return 2 * (e.x * e.y + e.y * e.z + e.z * e.x);
  }
  double diagonal() const { return length(extent()); }
};

inline double radians(double deg) { return deg * pi / 180; }
inline double degrees(double rad) { return rad * 180 / pi; }

inline double lerp(double a, double b, double t) { return a + (b - a) * t; }
inline vec3   lerp(vec3 a, vec3 b, double t) { return a + (b - a) * t; }

// Angle between two unit-ish vectors, robust near 0 and pi.
inline double angle_between(vec3 a, vec3 b) {
  return std::atan2(length(cross(a, b)), dot(a, b));
}

}  // namespace roomgt
