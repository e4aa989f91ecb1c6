#pragma once

// Simplified microfacet BRDF: Lambertian diffuse plus a GGX-style lobe with
// Schlick-Gaussian Fresnel and Smith-Schlick shadowing.
//
//   f = A/pi + D F G / (4 (N.l)(N.v))
//   D = R^4 / (pi ((N.h)^2 (R^4 - 1) + 1)^2)
//   F = (1 - F0) 2^((-5.55473 (v.h) - 6.98316) v.h) + F0
//   G = G1(v) G1(l),  G1(w) = (N.w) / ((N.w)(1 - k) + k),  k = (R + 1)^2 / 8

#include <cmath>

#include "math.hpp"

namespace roomgt {

inline constexpr double default_f0    = 0.05;
inline constexpr double min_roughness = 0.02;

struct microfacet_params {
  rgb    albedo    = {0.5, 0.5, 0.5};  // A
  double roughness = 0.5;              // R
  double f0        = default_f0;
};

// Evaluation directions, all unit length and expressed in the same space.
struct shading_frame {
  vec3 normal;  // N
  vec3 view;    // v, pointing away from the surface
  vec3 light;   // l, pointing away from the surface

  // Recomputed on every call; a zero vector when v = -l.
  vec3 half() const { return normalize(view + light); }
};

// True when D is a Dirac (R = 0 and N.h = 1); eval_D returns 0 there.
inline bool eval_D_singular(double n_dot_h, double roughness) {
  return roughness == 0 && n_dot_h >= 1;
}

inline double eval_D(double n_dot_h, double roughness) {
  if (eval_D_singular(n_dot_h, roughness)) return 0;
  double r4    = roughness * roughness * roughness * roughness;
  double denom = n_dot_h * n_dot_h * (r4 - 1) + 1;
  if (denom <= 0) return 0;
  return r4 / (pi * denom * denom);
}

inline double eval_F(double v_dot_h, double f0) {
  double exponent = (-5.55473 * v_dot_h - 6.98316) * v_dot_h;
  return (1 - f0) * std::exp2(exponent) + f0;
}

inline double eval_G1(double n_dot_w, double roughness) {
  if (n_dot_w <= 0) return 0;
  double k = (roughness + 1) * (roughness + 1) / 8;
  return n_dot_w / (n_dot_w * (1 - k) + k);
}

// Returns zero for frames with N.v <= 0 or N.l <= 0. Roughness is clamped to
// min_roughness so the lobe stays finite.
inline rgb eval_brdf(const microfacet_params& params, const shading_frame& frame) {
  double n_dot_v = dot(frame.normal, frame.view);
  double n_dot_l = dot(frame.normal, frame.light);
  if (n_dot_v <= 0 || n_dot_l <= 0) return {};
  auto diffuse = params.albedo * inv_pi;
  auto h       = frame.half();
  if (is_zero(h)) return {};
  double roughness = std::max(params.roughness, min_roughness);
  double n_dot_h   = std::clamp(dot(frame.normal, h), 0.0, 1.0);
  double v_dot_h   = std::clamp(dot(frame.view, h), 0.0, 1.0);
  double d         = eval_D(n_dot_h, roughness);
  double f         = eval_F(v_dot_h, params.f0);
  double g = eval_G1(n_dot_v, roughness) * eval_G1(n_dot_l, roughness);
  double specular = d * f * g / (4 * n_dot_l * n_dot_v);
  return diffuse + rgb{specular, specular, specular};
}

struct hemisphere_sample {
  vec3   direction;
  double pdf = 0;
};

inline constexpr double uniform_hemisphere_pdf = 1 / (2 * pi);

// Uniform over the hemisphere around `normal`; pdf is 1/(2 pi) per steradian.
inline hemisphere_sample sample_uniform_hemisphere(vec3 normal, vec2 u) {
  double z   = u.x;
  double r   = std::sqrt(std::max(0.0, 1 - z * z));
  double phi = 2 * pi * u.y;
  auto   local = vec3{r * std::cos(phi), r * std::sin(phi), z};
  return {basis_from_z(normal).to_world(local), uniform_hemisphere_pdf};
}

}  // namespace roomgt
