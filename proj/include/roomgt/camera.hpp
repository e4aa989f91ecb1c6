#pragma once

#include <cmath>

#include "error.hpp"
#include "math.hpp"

namespace roomgt {

// Pinhole camera. Image row 0 is the top of the picture.
struct camera {
  vec3   position  = {};
  vec3   direction = {0, 1, 0};  // unit look direction
  vec3   up        = {0, 0, 1};
  double vfov      = 60;  // degrees
  int    width     = 64;
  int    height    = 64;
};

inline void validate_camera(const camera& cam) {
  if (!(cam.vfov > 0 && cam.vfov < 180)) throw error("camera fov must be in (0, 180) degrees");
  if (cam.width <= 0 || cam.height <= 0) throw error("camera resolution must be positive");
  if (!isfinite(cam.position) || !isfinite(cam.direction) || !isfinite(cam.up))
    throw error("camera pose must be finite");
  if (length(cross(normalize(cam.direction), normalize(cam.up))) < 1e-6)
    throw error("camera direction and up are parallel");
}

// Camera space: x right, y up, z pointing back toward the viewer.
inline frame3 camera_frame(const camera& cam) {
  auto forward = normalize(cam.direction);
  auto right   = normalize(cross(forward, cam.up));
  auto up      = cross(right, forward);
  return {right, up, -forward};
}

// Ray through continuous image coordinates (px, py), px in [0, width).
inline ray3 camera_ray(const camera& cam, double px, double py) {
  auto   f      = camera_frame(cam);
  double tan_y  = std::tan(radians(cam.vfov) / 2);
  double aspect = double(cam.width) / double(cam.height);
  double sx     = (2 * px / cam.width - 1) * tan_y * aspect;
  double sy     = (1 - 2 * py / cam.height) * tan_y;
  auto   d      = normalize(f.x * sx + f.y * sy - f.z);
  return {cam.position, d, 0, infinity};
}

inline camera look_at(vec3 position, vec3 target, vec3 up, double vfov, int width, int height) {
  return {position, normalize(target - position), up, vfov, width, height};
}

}  // namespace roomgt
