#pragma once

// Path tracer with next-event estimation. Each vertex combines one light
// sample and one uniform-hemisphere sample with the power heuristic
// (exponent 2). No BRDF importance sampling and no Russian roulette.
//
// Besides HDR radiance, a render produces the ground-truth stack: first-hit
// G-buffers, per-light direct shading with and without occlusion, their
// visibility ratio, and per-pixel incoming-radiance maps.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brdf.hpp"
#include "image.hpp"
#include "lights.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "scene.hpp"

namespace roomgt {

// -----------------------------------------------------------------------------
// MIS
// -----------------------------------------------------------------------------

// Power-heuristic contribution of one sample of radiance `L` (already
// multiplied by f cos). `light_sampled` selects which strategy produced it.
inline rgb mis_contribution(rgb L, bool light_sampled, double pdf_light, double pdf_hemi) {
  double active = light_sampled ? pdf_light : pdf_hemi;
  if (!(active > 0)) return {};
  double denom  = pdf_light * pdf_light + pdf_hemi * pdf_hemi;
  double weight = active * active / denom;
  return L * (weight / active);
}

// -----------------------------------------------------------------------------
// Tracing against meshes and lamp boxes
// -----------------------------------------------------------------------------

struct trace_hit {
  enum class kind { miss, surface, lamp };
  kind        what    = kind::miss;
  surface_hit surface = {};
  int         lamp_id = -1;
  double      t       = infinity;
};

inline trace_hit trace(const scene& scn, const ray3& ray) {
  auto result = trace_hit{};
  auto hit    = intersect(scn, ray);
  if (hit.hit) {
    result.what    = trace_hit::kind::surface;
    result.surface = hit;
    result.t       = hit.t;
  }
  auto& lights = scn.lights();
  for (int id = 0; id < int(lights.size()); id++) {
    auto* lamp = std::get_if<lamp_light>(&lights[id]);
    if (!lamp) continue;
    auto probe = ray;
    probe.tmax = result.t;
    if (auto bh = intersect_box(*lamp, probe)) {
      result.what    = trace_hit::kind::lamp;
      result.lamp_id = id;
      result.t       = bh->t;
    }
  }
  return result;
}

// Surface point prepared for shading; normals face the outgoing direction.
struct shading_point {
  vec3              position;
  vec3              geometric_normal;
  vec3              normal;
  vec3              wo;
  microfacet_params params;
};

inline shading_point make_shading_point(const scene& scn, const surface_hit& hit, vec3 wo) {
  auto sp             = shading_point{};
  sp.position         = hit.position;
  sp.geometric_normal = hit.geometric_normal;
  sp.normal           = hit.normal;
  sp.wo               = wo;
  if (dot(sp.geometric_normal, wo) < 0) {
    sp.geometric_normal = -sp.geometric_normal;
    sp.normal           = -sp.normal;
  }
  sp.params = sample_material(scn.materials()[hit.material], hit.uv);
  return sp;
}

// Active light ids: the filter alone, or every light.
inline std::vector<int> active_lights(const scene& scn, std::optional<int> filter) {
  if (filter) return {*filter};
  auto ids = std::vector<int>(scn.lights().size());
  for (int i = 0; i < int(ids.size()); i++) ids[i] = i;
  return ids;
}

// Calls emit(light_id, radiance) for every active light that direction
// `dir` from `p` reaches. With occlusion, only what the ray actually sees
// first counts; without it, every light the ray geometrically crosses counts.
template <typename Emit>
inline void lights_along(const scene& scn, vec3 p, vec3 dir, const std::vector<int>& active,
    bool occlusion, Emit&& emit) {
  auto  ray    = ray3{p, dir, scn.epsilon(), infinity};
  auto& lights = scn.lights();
  auto is_active = [&](int id) {
    return std::find(active.begin(), active.end(), id) != active.end();
  };
  if (occlusion) {
    auto hit = trace(scn, ray);
    if (hit.what == trace_hit::kind::lamp) {
      if (is_active(hit.lamp_id)) emit(hit.lamp_id, std::get<lamp_light>(lights[hit.lamp_id]).emission);
    } else if (hit.what == trace_hit::kind::miss) {
      for (int id : active)
        if (auto* w = std::get_if<window_light>(&lights[id]))
          if (intersect_window(*w, ray)) emit(id, w->radiance(dir));
    }
    return;
  }
  for (int id : active) {
    if (auto* lamp = std::get_if<lamp_light>(&lights[id])) {
      if (intersect_box(*lamp, ray)) emit(id, lamp->emission);
    } else {
      auto& w = std::get<window_light>(lights[id]);
      if (intersect_window(w, ray)) emit(id, w.radiance(dir));
    }
  }
}

// Light-strategy half of NEE: one light sample, MIS weighted. Consumes 4
// dimensions. The light pdf is per selected light (selection 1/n).
inline rgb direct_light_strategy(const scene& scn, const shading_point& sp, sampler& rng,
    bool occlusion, const std::vector<int>& active) {
  double u0 = rng.next1(), u1 = rng.next1(), u2 = rng.next1(), u3 = rng.next1();
  if (active.empty()) return {};
  int  n  = int(active.size());
  int  id = active[std::min(n - 1, int(u0 * n))];
  auto ls = sample_light(scn.lights()[id], sp.position, {u1, u2, u3});
  if (!(ls.pdf > 0) || is_zero(ls.radiance)) return {};
  double cos_n = dot(sp.normal, ls.direction);
  if (cos_n <= 0 || dot(sp.geometric_normal, ls.direction) <= 0) return {};
  if (occlusion) {
    bool blocked = ls.at_infinity ? occluded_to_infinity(scn, sp.position, ls.direction)
                                  : occluded(scn, sp.position, ls.point);
    if (blocked) return {};
  }
  auto f = eval_brdf(sp.params, {sp.normal, sp.wo, ls.direction});
  return mis_contribution(f * ls.radiance * cos_n, true, ls.pdf / n, uniform_hemisphere_pdf);
}

// Direct illumination at a shading point: one light sample plus one
// hemisphere sample. Consumes 6 dimensions at the sampler's current bounce.
inline rgb estimate_direct(const scene& scn, const shading_point& sp, sampler& rng,
    bool occlusion = true, std::optional<int> light_filter = std::nullopt) {
  auto active = active_lights(scn, light_filter);
  auto total  = direct_light_strategy(scn, sp, rng, occlusion, active);
  auto hs     = sample_uniform_hemisphere(sp.normal, rng.next2());
  if (active.empty() || dot(sp.geometric_normal, hs.direction) <= 0) return total;
  double cos_n = dot(sp.normal, hs.direction);
  auto   f     = eval_brdf(sp.params, {sp.normal, sp.wo, hs.direction});
  double n     = double(active.size());
  lights_along(scn, sp.position, hs.direction, active, occlusion, [&](int id, rgb Le) {
    double pl = pdf_light(scn.lights()[id], sp.position, hs.direction) / n;
    total += mis_contribution(f * Le * cos_n, false, pl, hs.pdf);
  });
  return total;
}

// Radiance seen by a ray that reaches a light or escapes (no surface).
inline rgb emitted_along(const scene& scn, const trace_hit& hit, const ray3& ray) {
  if (hit.what == trace_hit::kind::lamp)
    return std::get<lamp_light>(scn.lights()[hit.lamp_id]).emission;
  if (hit.what == trace_hit::kind::miss) return envmap_through_window(scn.lights(), ray);
  return {};
}

// Outgoing radiance toward `wo` from a surface vertex at path depth `depth`
// (0 = first visible surface). NEE runs at depths 0..max_bounces.
inline rgb outgoing_radiance(const scene& scn, surface_hit hit, vec3 wo, sampler& rng,
    int depth, int max_bounces) {
  auto L      = rgb{};
  auto beta   = rgb{1, 1, 1};
  auto active = active_lights(scn, std::nullopt);
  double n    = double(active.size());
  for (; depth <= max_bounces; depth++) {
    rng.start_bounce(depth + 1);
    auto sp = make_shading_point(scn, hit, wo);
    L += beta * direct_light_strategy(scn, sp, rng, true, active);

    auto hs = sample_uniform_hemisphere(sp.normal, rng.next2());
    if (dot(sp.geometric_normal, hs.direction) <= 0) break;
    double cos_n = dot(sp.normal, hs.direction);
    auto   f     = eval_brdf(sp.params, {sp.normal, sp.wo, hs.direction});
    if (is_zero(f)) break;
    auto ray  = ray3{sp.position, hs.direction, scn.epsilon(), infinity};
    auto next = trace(scn, ray);
    if (next.what != trace_hit::kind::surface) {
      if (!active.empty()) {
        lights_along(scn, sp.position, hs.direction, active, true, [&](int id, rgb Le) {
          double pl = pdf_light(scn.lights()[id], sp.position, hs.direction) / n;
          L += beta * mis_contribution(f * Le * cos_n, false, pl, hs.pdf);
        });
      }
      break;
    }
    if (depth == max_bounces) break;
    beta *= f * (cos_n / hs.pdf);
    hit = next.surface;
    wo  = -hs.direction;
  }
  return L;
}

// Radiance arriving along `ray` from scene content at path depth `depth`.
// `direct_only` stops at the first surface (only lights count).
inline rgb incoming_radiance(const scene& scn, const ray3& ray, sampler& rng, int depth,
    int max_bounces, bool direct_only) {
  auto hit = trace(scn, ray);
  if (hit.what != trace_hit::kind::surface) return emitted_along(scn, hit, ray);
  if (direct_only || depth > max_bounces) return {};
  return outgoing_radiance(scn, hit.surface, -ray.d, rng, depth, max_bounces);
}

// -----------------------------------------------------------------------------
// Configuration and outputs
// -----------------------------------------------------------------------------

struct render_config {
  int      spp         = 16;
  int      max_bounces = 7;
  uint64_t seed        = 0;
  int      threads     = 0;  // 0: OR_THREADS or hardware concurrency

  bool radiance  = true;
  bool gbuffer   = true;
  bool per_light = false;  // direct shading (+/- occlusion) and visibility
  bool envmaps   = false;  // per-pixel incoming radiance grids

  bool               direct_only  = false;  // radiance channel without inter-reflection
  std::optional<int> light_filter = {};     // per-light channels for this id only

  int envmap_stride = 4;
  int envmap_theta  = 8;
  int envmap_phi    = 16;
  int envmap_spp    = 64;  // hemisphere (and light) samples per texel
};

inline void validate_config(const render_config& config, const scene& scn) {
  if (config.spp < 1) throw error("spp must be >= 1");
  if (config.max_bounces < 0) throw error("max bounces must be >= 0");
  if (config.envmap_stride < 1) throw error("envmap stride must be >= 1");
  if (config.envmap_theta < 1 || config.envmap_phi < 1)
    throw error("envmap resolution must be at least 1x1");
  if (config.envmap_spp < 1) throw error("envmap samples per texel must be >= 1");
  if (config.light_filter &&
      (*config.light_filter < 0 || *config.light_filter >= int(scn.lights().size())))
    throw error("light filter id " + std::to_string(*config.light_filter) +
                " is not a light in the scene");
}

struct per_light_channels {
  int   light_id = -1;
  image direct_occluded;    // RGB, direct shading of this light alone
  image direct_unoccluded;  // RGB, same without the occlusion test
  image visibility;         // 1 channel, ratio of the two; 1 where undefined
};

// Incoming-radiance maps at every `stride`-th pixel, tiled into one image of
// (rows * theta) x (cols * phi). Texels split the hemisphere around the
// shading normal into equal solid angles: theta bins are uniform in cos
// (bin 0 at the normal), phi bins uniform from the frame's tangent axis.
struct envmap_grid {
  int              stride = 4, theta = 8, phi = 16;
  int              rows = 0, cols = 0;
  std::vector<int> pixel_x, pixel_y;  // image pixel of each grid column / row
  image            texels;

  double texel_solid_angle() const { return 2 * pi / (theta * phi); }
  rgb    texel(int row, int col, int t, int p) const {
    return texels.rgb_at(col * phi + p, row * theta + t);
  }
};

// Texel center direction in the local frame (z = normal).
inline vec3 envmap_texel_direction(int t, int p, int theta_res, int phi_res) {
  double c0 = 1 - double(t) / theta_res, c1 = 1 - double(t + 1) / theta_res;
  double cos_t = (c0 + c1) / 2, sin_t = std::sqrt(std::max(0.0, 1 - cos_t * cos_t));
  double phi = (p + 0.5) * 2 * pi / phi_res;
  return {sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t};
}

inline std::pair<int, int> envmap_texel_of(vec3 local, int theta_res, int phi_res) {
  int t = std::clamp(int((1 - local.z) * theta_res), 0, theta_res - 1);
  double phi = std::atan2(local.y, local.x);
  if (phi < 0) phi += 2 * pi;
  int p = std::clamp(int(phi / (2 * pi) * phi_res), 0, phi_res - 1);
  return {t, p};
}

struct channel_set {
  int   width = 0, height = 0;
  image radiance;     // RGB
  image direct;       // RGB, direct shading from all lights with occlusion
  image albedo;       // RGB
  image normal;       // RGB, camera-space unit normal, zero on background
  image depth;        // 1 channel, meters along the view axis, 0 on background
  image roughness;    // 1 channel
  image instance;     // 1 channel, instance id, -1 on background
  image light_mask;   // 1 channel, light id + 1 where a light is seen, else 0
  std::vector<per_light_channels> per_light;
  std::optional<envmap_grid>      envmap_direct;
  std::optional<envmap_grid>      envmap_full;
};

// -----------------------------------------------------------------------------
// G-buffer
// -----------------------------------------------------------------------------

struct gbuffer_sample {
  trace_hit hit;
  rgb       albedo    = {};
  vec3      normal    = {};  // camera space
  double    depth     = 0;
  double    roughness = 0;
  int       instance  = -1;
  int       light     = -1;
};

inline gbuffer_sample gbuffer_at(const scene& scn, const camera& cam, double px, double py) {
  auto ray = camera_ray(cam, px, py);
  auto g   = gbuffer_sample{};
  g.hit    = trace(scn, ray);
  auto forward = normalize(cam.direction);
  if (g.hit.what == trace_hit::kind::surface) {
    auto& h     = g.hit.surface;
    auto  sp    = make_shading_point(scn, h, -ray.d);
    g.albedo    = sp.params.albedo;
    g.roughness = sp.params.roughness;
    g.normal    = camera_frame(cam).to_local(sp.normal);
    g.depth     = h.t * dot(ray.d, forward);
    g.instance  = h.instance_id;
    auto& mesh  = scn.meshes()[h.mesh];
    if (mesh.light_link) g.light = *mesh.light_link;
  } else if (g.hit.what == trace_hit::kind::lamp) {
    g.depth = g.hit.t * dot(ray.d, forward);
    g.light = g.hit.lamp_id;
  } else {
    double best = infinity;
    for (int id = 0; id < int(scn.lights().size()); id++)
      if (auto* w = std::get_if<window_light>(&scn.lights()[id]))
        if (auto t = intersect_window(*w, ray); t && *t < best) {
          best    = *t;
          g.light = id;
        }
  }
  return g;
}

// -----------------------------------------------------------------------------
// Rendering
// -----------------------------------------------------------------------------

namespace detail {
inline constexpr uint64_t stream_camera   = 0;
inline constexpr uint64_t stream_direct   = 1;
inline constexpr uint64_t stream_envmap   = 2;
inline constexpr uint64_t stream_light0   = 16;
}  // namespace detail

// Per-pixel incoming radiance map at a first-hit surface. Returns texel
// radiance (mean over each texel's solid angle), theta-major.
inline std::vector<rgb> render_point_envmap(const scene& scn, const shading_point& sp,
    const render_config& config, uint64_t pixel, bool direct_only) {
  int  nt = config.envmap_theta, np = config.envmap_phi, spp = config.envmap_spp;
  auto acc      = std::vector<rgb>(size_t(nt) * np);
  auto frame    = basis_from_z(sp.normal);
  auto active   = active_lights(scn, std::nullopt);
  double n      = double(active.size());
  auto   total  = double(nt) * np * spp;
  auto mixture_pdf = [&](vec3 dir) {
    double p = 0;
    for (int id : active) p += pdf_light(scn.lights()[id], sp.position, dir);
    return n > 0 ? p / n : 0.0;
  };
  auto add = [&](vec3 dir, rgb contribution) {
    auto [t, p] = envmap_texel_of(frame.to_local(dir), nt, np);
    acc[size_t(t) * np + p] += contribution;
  };
  auto stream = detail::stream_envmap + (direct_only ? 0 : 1);
  for (int t = 0; t < nt; t++) {
    for (int p = 0; p < np; p++) {
      for (int k = 0; k < spp; k++) {
        auto sample_index = (uint64_t(t) * np + p) * spp + k;
        auto rng = sampler(config.seed, pixel, sample_index, stream);
        rng.start_bounce(0);
        // Hemisphere strategy, stratified per texel (equal solid angles).
        double c0 = 1 - double(t) / nt, c1 = 1 - double(t + 1) / nt;
        double cos_t = lerp(c0, c1, rng.next1());
        double phi   = (p + rng.next1()) * 2 * pi / np;
        double sin_t = std::sqrt(std::max(0.0, 1 - cos_t * cos_t));
        auto dir = frame.to_world({sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t});
        if (dot(dir, sp.geometric_normal) > 0) {
          auto ray = ray3{sp.position, dir, scn.epsilon(), infinity};
          auto L   = incoming_radiance(scn, ray, rng, 1, config.max_bounces, direct_only);
          add(dir, mis_contribution(L, false, mixture_pdf(dir), uniform_hemisphere_pdf));
        }
        // Light strategy.
        if (active.empty()) continue;
        rng.start_bounce(0);
        rng.next2();  // skip the hemisphere dimensions
        double u0 = rng.next1(), u1 = rng.next1(), u2 = rng.next1(), u3 = rng.next1();
        int  id = active[std::min(int(n) - 1, int(u0 * n))];
        auto ls = sample_light(scn.lights()[id], sp.position, {u1, u2, u3});
        if (!(ls.pdf > 0)) continue;
        if (dot(ls.direction, sp.normal) <= 0 || dot(ls.direction, sp.geometric_normal) <= 0)
          continue;
        auto ray = ray3{sp.position, ls.direction, scn.epsilon(), infinity};
        auto L   = incoming_radiance(scn, ray, rng, 1, config.max_bounces, direct_only);
        add(ls.direction,
            mis_contribution(L, true, mixture_pdf(ls.direction), uniform_hemisphere_pdf));
      }
    }
  }
  double texel_omega = 2 * pi / (nt * np);
  for (auto& v : acc) v = v / (total * texel_omega);
  return acc;
}

inline envmap_grid make_envmap_grid(const camera& cam, const render_config& config) {
  auto g   = envmap_grid{};
  g.stride = config.envmap_stride;
  g.theta  = config.envmap_theta;
  g.phi    = config.envmap_phi;
  g.rows   = (cam.height + g.stride - 1) / g.stride;
  g.cols   = (cam.width + g.stride - 1) / g.stride;
  for (int c = 0; c < g.cols; c++)
    g.pixel_x.push_back(std::min(cam.width - 1, c * g.stride + g.stride / 2));
  for (int r = 0; r < g.rows; r++)
    g.pixel_y.push_back(std::min(cam.height - 1, r * g.stride + g.stride / 2));
  g.texels = image(g.cols * g.phi, g.rows * g.theta, 3);
  return g;
}

// Per-pixel environment maps (direct-only and direct + indirect) at the
// configured stride, evaluated at each grid pixel's center ray.
inline std::pair<envmap_grid, envmap_grid> render_perpixel_envmaps(
    const scene& scn, const camera& cam, const render_config& config) {
  validate_config(config, scn);
  auto direct = make_envmap_grid(cam, config);
  auto full   = direct;
  int  cells  = direct.rows * direct.cols;
  parallel_for(cells, resolve_threads(config.threads), [&](int cell) {
    int  row = cell / direct.cols, col = cell % direct.cols;
    int  px = direct.pixel_x[col], py = direct.pixel_y[row];
    auto ray = camera_ray(cam, px + 0.5, py + 0.5);
    auto hit = trace(scn, ray);
    auto pixel = uint64_t(py) * cam.width + px;
    int  nt = direct.theta, np = direct.phi;
    if (hit.what == trace_hit::kind::surface) {
      auto sp = make_shading_point(scn, hit.surface, -ray.d);
      auto d  = render_point_envmap(scn, sp, config, pixel, true);
      auto f  = render_point_envmap(scn, sp, config, pixel, false);
      for (int t = 0; t < nt; t++)
        for (int p = 0; p < np; p++) {
          direct.texels.set_rgb(col * np + p, row * nt + t, d[size_t(t) * np + p]);
          full.texels.set_rgb(col * np + p, row * nt + t, f[size_t(t) * np + p]);
        }
    } else {
      // No surface: what escapes along directions around the view ray.
      auto frame = basis_from_z(ray.d);
      for (int t = 0; t < nt; t++)
        for (int p = 0; p < np; p++) {
          auto dir = frame.to_world(envmap_texel_direction(t, p, nt, np));
          auto v   = envmap_through_window(scn.lights(), ray3{ray.o, dir, 0, infinity});
          direct.texels.set_rgb(col * np + p, row * nt + t, v);
          full.texels.set_rgb(col * np + p, row * nt + t, v);
        }
    }
  });
  return {std::move(direct), std::move(full)};
}

inline channel_set render(const scene& scn, const camera& cam, const render_config& config) {
  validate_config(config, scn);
  validate_camera(cam);
  int  w = cam.width, h = cam.height;
  auto out   = channel_set{};
  out.width  = w;
  out.height = h;
  if (config.radiance) out.radiance = image(w, h, 3);
  if (config.gbuffer) {
    out.albedo     = image(w, h, 3);
    out.normal     = image(w, h, 3);
    out.depth      = image(w, h, 1);
    out.roughness  = image(w, h, 1);
    out.instance   = image(w, h, 1, -1.0f);
    out.light_mask = image(w, h, 1);
  }
  auto light_ids = std::vector<int>{};
  if (config.per_light) {
    out.direct = image(w, h, 3);
    light_ids  = active_lights(scn, config.light_filter);
    for (int id : light_ids)
      out.per_light.push_back({id, image(w, h, 3), image(w, h, 3), image(w, h, 1, 1.0f)});
  }

  int radiance_bounces = config.direct_only ? 0 : config.max_bounces;
  parallel_for_pixels(w, h, resolve_threads(config.threads), [&](int x, int y) {
    auto pixel = uint64_t(y) * w + x;
    if (config.gbuffer) {
      auto g = gbuffer_at(scn, cam, x + 0.5, y + 0.5);
      out.albedo.set_rgb(x, y, g.albedo);
      out.normal.set_rgb(x, y, g.normal);
      out.depth.at(x, y)      = float(g.depth);
      out.roughness.at(x, y)  = float(g.roughness);
      out.instance.at(x, y)   = float(g.instance);
      out.light_mask.at(x, y) = float(g.light + 1);
    }
    if (!config.radiance && !config.per_light) return;

    auto radiance = rgb{}, direct = rgb{};
    auto occ   = std::vector<rgb>(light_ids.size());
    auto unocc = std::vector<rgb>(light_ids.size());
    for (int s = 0; s < config.spp; s++) {
      auto cam_rng = sampler(config.seed, pixel, uint64_t(s), detail::stream_camera);
      cam_rng.start_bounce(0);
      auto jitter = cam_rng.next2();
      auto ray    = camera_ray(cam, x + jitter.x, y + jitter.y);
      auto hit    = trace(scn, ray);
      if (hit.what != trace_hit::kind::surface) {
        if (config.radiance) radiance += emitted_along(scn, hit, ray);
        continue;
      }
      if (config.radiance)
        radiance += outgoing_radiance(scn, hit.surface, -ray.d, cam_rng, 0, radiance_bounces);
      if (config.per_light) {
        auto sp = make_shading_point(scn, hit.surface, -ray.d);
        auto all_rng = sampler(config.seed, pixel, uint64_t(s), detail::stream_direct);
        direct += estimate_direct(scn, sp, all_rng, true, std::nullopt);
        for (size_t k = 0; k < light_ids.size(); k++) {
          // Same random numbers with and without occlusion, so each sample of
          // the occluded estimate is bounded by the unoccluded one.
          auto rng = sampler(config.seed, pixel, uint64_t(s),
              detail::stream_light0 + uint64_t(light_ids[k]));
          auto rng_copy = rng;
          occ[k] += estimate_direct(scn, sp, rng, true, light_ids[k]);
          unocc[k] += estimate_direct(scn, sp, rng_copy, false, light_ids[k]);
        }
      }
    }
    double inv = 1.0 / config.spp;
    if (config.radiance) out.radiance.set_rgb(x, y, radiance * inv);
    if (config.per_light) {
      out.direct.set_rgb(x, y, direct * inv);
      for (size_t k = 0; k < light_ids.size(); k++) {
        auto& ch = out.per_light[k];
        ch.direct_occluded.set_rgb(x, y, occ[k] * inv);
        ch.direct_unoccluded.set_rgb(x, y, unocc[k] * inv);
        double den = sum(unocc[k]);
        ch.visibility.at(x, y) = den > 0 ? float(std::clamp(sum(occ[k]) / den, 0.0, 1.0)) : 1.0f;
      }
    }
  });

  if (config.envmaps) {
    auto [d, f]       = render_perpixel_envmaps(scn, cam, config);
    out.envmap_direct = std::move(d);
    out.envmap_full   = std::move(f);
  }
  return out;
}

}  // namespace roomgt
