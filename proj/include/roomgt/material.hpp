#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "brdf.hpp"
#include "image.hpp"
#include "math.hpp"

namespace roomgt {

// Bilinear lookup with repeat addressing. Texel (i, j) is centered at
// uv = ((i + 0.5) / width, (j + 0.5) / height); row j = 0 is at v = 0.
inline vec3 sample_texture(const image& tex, vec2 uv) {
  double s  = uv.x * tex.width - 0.5;
  double t  = uv.y * tex.height - 0.5;
  double sx = std::floor(s), ty = std::floor(t);
  double fx = s - sx, fy = t - ty;
  auto wrap = [](double i, int n) {
    auto k = std::fmod(i, double(n));
    if (k < 0) k += n;
    return int(k) % n;
  };
  int x0 = wrap(sx, tex.width), x1 = wrap(sx + 1, tex.width);
  int y0 = wrap(ty, tex.height), y1 = wrap(ty + 1, tex.height);
  return tex.rgb_at(x0, y0) * ((1 - fx) * (1 - fy)) + tex.rgb_at(x1, y0) * (fx * (1 - fy)) +
         tex.rgb_at(x0, y1) * ((1 - fx) * fy) + tex.rgb_at(x1, y1) * (fx * fy);
}

// Spatially varying microfacet material. Maps override the constants.
struct svbrdf_material {
  std::string          id;
  rgb                  albedo        = {0.5, 0.5, 0.5};
  double               roughness     = 0.5;
  std::optional<image> albedo_map    = {};
  std::optional<image> roughness_map = {};  // first channel is used
  std::optional<image> normal_map    = {};  // tangent space, encoded as (n + 1) / 2
  vec2                 uv_scale      = {1, 1};
};

inline microfacet_params sample_material(const svbrdf_material& material, vec2 uv) {
  auto st     = vec2{uv.x * material.uv_scale.x, uv.y * material.uv_scale.y};
  auto params = microfacet_params{};
  params.albedo =
      material.albedo_map ? sample_texture(*material.albedo_map, st) : material.albedo;
  params.roughness =
      material.roughness_map ? sample_texture(*material.roughness_map, st).x : material.roughness;
  params.albedo    = clamp(params.albedo, 0, 1);
  params.roughness = std::clamp(params.roughness, 0.0, 1.0);
  return params;
}

// Tangent-space normal from the normal map, or +z when there is none.
inline vec3 sample_normal_map(const svbrdf_material& material, vec2 uv) {
  if (!material.normal_map) return {0, 0, 1};
  auto st = vec2{uv.x * material.uv_scale.x, uv.y * material.uv_scale.y};
  auto n  = sample_texture(*material.normal_map, st) * 2.0 - vec3{1, 1, 1};
  n       = normalize(n);
  return is_zero(n) ? vec3{0, 0, 1} : n;
}

}  // namespace roomgt
