#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvh.hpp"
#include "camera.hpp"
#include "error.hpp"
#include "lights.hpp"
#include "material.hpp"
#include "mesh.hpp"

namespace roomgt {

// Everything needed to build a scene. Mutable; `scene` is its validated,
// immutable, accelerated counterpart.
struct scene_description {
  std::vector<triangle_mesh>   meshes;
  std::vector<svbrdf_material> materials;
  std::vector<light>           lights;
  std::vector<camera>          cameras;
};

struct surface_hit {
  bool   hit         = false;
  double t           = infinity;
  vec3   position    = {};
  vec3   geometric_normal = {};  // unit, from the triangle winding
  vec3   normal      = {};       // shading normal N, unit, same side as geometric
  vec2   uv          = {};
  int    instance_id = -1;
  int    material    = -1;
  int    mesh        = -1;
  int    triangle    = -1;       // index into the mesh's triangles
  int    primitive   = -1;       // global triangle index
};

// Moller-Trumbore. Returns (t, b1, b2) when the ray hits inside (tmin, tmax).
struct triangle_isect {
  double t = 0, b1 = 0, b2 = 0;
};

inline std::optional<triangle_isect> intersect_triangle(
    const ray3& ray, const vec3& p0, const vec3& p1, const vec3& p2) {
  auto e1  = p1 - p0;
  auto e2  = p2 - p0;
  auto pv  = cross(ray.d, e2);
  auto det = dot(e1, pv);
  if (std::abs(det) <= 1e-12 * length(e1) * length(e2)) return std::nullopt;
  auto inv = 1 / det;
  auto tv  = ray.o - p0;
  auto b1  = dot(tv, pv) * inv;
  if (b1 < 0 || b1 > 1) return std::nullopt;
  auto qv = cross(tv, e1);
  auto b2 = dot(ray.d, qv) * inv;
  if (b2 < 0 || b1 + b2 > 1) return std::nullopt;
  auto t = dot(e2, qv) * inv;
  if (!(t > ray.tmin && t < ray.tmax)) return std::nullopt;
  return triangle_isect{t, b1, b2};
}

class scene {
 public:
  struct primitive_ref {
    int mesh, triangle;
  };

  scene() : scene(scene_description{}) {}

  explicit scene(scene_description desc) : desc_{std::move(desc)} {
    for (size_t i = 0; i < desc_.meshes.size(); i++) {
      auto& mesh = desc_.meshes[i];
      auto  name = "mesh " + std::to_string(i);
      validate_mesh(mesh, name);
      if (mesh.material < 0 || mesh.material >= int(desc_.materials.size()))
        throw reference_error(std::to_string(mesh.material), name + ": unknown material");
      if (mesh.light_link &&
          (*mesh.light_link < 0 || *mesh.light_link >= int(desc_.lights.size())))
        throw reference_error(std::to_string(*mesh.light_link), name + ": unknown light");
    }
    for (auto& cam : desc_.cameras) validate_camera(cam);

    auto bounds = std::vector<bbox3>{};
    for (int m = 0; m < int(desc_.meshes.size()); m++) {
      auto& mesh = desc_.meshes[m];
      for (int t = 0; t < int(mesh.triangles.size()); t++) {
        auto  tri = mesh.triangles[t];
        auto  b   = bbox3{};
        for (int k = 0; k < 3; k++) b.expand(mesh.positions[tri[k]]);
        prims_.push_back({m, t});
        bounds.push_back(b);
        bounds_.expand(b);
      }
    }
    // Windows can be very large stand-ins for an open sky, so they do not
    // set the ray offset scale.
    auto solid = bounds_;
    for (auto& l : desc_.lights) {
      if (auto* lamp = std::get_if<lamp_light>(&l)) {
        for (int f = 0; f < 6; f++) {
          auto face = lamp_face(*lamp, f);
          for (double a : {-1.0, 1.0})
            for (double b : {-1.0, 1.0}) {
              bounds_.expand(face.center + face.axis_a * a + face.axis_b * b);
              solid.expand(face.center + face.axis_a * a + face.axis_b * b);
            }
        }
      } else {
        auto& w = std::get<window_light>(l);
        bounds_.expand(w.corner);
        bounds_.expand(w.corner + w.edge_u + w.edge_v);
        bounds_.expand(w.corner + w.edge_u);
        bounds_.expand(w.corner + w.edge_v);
      }
    }
    bvh_ = build_bvh(bounds);
    epsilon_ = 1e-4 * std::max(solid.diagonal(), 1e-3);
  }

  const std::vector<triangle_mesh>&   meshes() const { return desc_.meshes; }
  const std::vector<svbrdf_material>& materials() const { return desc_.materials; }
  const std::vector<light>&           lights() const { return desc_.lights; }
  const std::vector<camera>&          cameras() const { return desc_.cameras; }
  const scene_description&            description() const { return desc_; }
  const std::vector<primitive_ref>&   primitives() const { return prims_; }
  const bvh_tree&                     bvh() const { return bvh_; }
  const bbox3&                        bounds() const { return bounds_; }

  // Offset applied at both ends of shadow rays and to spawned rays.
  double epsilon() const { return epsilon_; }

  std::optional<triangle_isect> intersect_primitive(int prim, const ray3& ray) const {
    auto [m, t] = prims_[prim];
    auto& mesh  = desc_.meshes[m];
    auto  tri   = mesh.triangles[t];
    return intersect_triangle(
        ray, mesh.positions[tri.x], mesh.positions[tri.y], mesh.positions[tri.z]);
  }

  // Shading data for a primitive hit.
  surface_hit make_hit(int prim, const ray3& ray, const triangle_isect& isect) const {
    auto [m, t] = prims_[prim];
    auto& mesh  = desc_.meshes[m];
    auto  tri   = mesh.triangles[t];
    auto  p0 = mesh.positions[tri.x], p1 = mesh.positions[tri.y], p2 = mesh.positions[tri.z];
    double b0 = 1 - isect.b1 - isect.b2;
    auto   h  = surface_hit{};
    h.hit         = true;
    h.t           = isect.t;
    h.position    = ray.at(isect.t);
    h.geometric_normal = normalize(cross(p1 - p0, p2 - p0));
    h.normal      = mesh.normals.empty()
                        ? h.geometric_normal
                        : normalize(mesh.normals[tri.x] * b0 + mesh.normals[tri.y] * isect.b1 +
                                    mesh.normals[tri.z] * isect.b2);
    if (dot(h.normal, h.geometric_normal) < 0) h.normal = -h.normal;
    if (!mesh.uvs.empty())
      h.uv = mesh.uvs[tri.x] * b0 + mesh.uvs[tri.y] * isect.b1 + mesh.uvs[tri.z] * isect.b2;
    h.instance_id = mesh.instance_id;
    h.material    = mesh.material;
    h.mesh        = m;
    h.triangle    = t;
    h.primitive   = prim;

    auto& material = desc_.materials[mesh.material];
    if (material.normal_map && !mesh.uvs.empty()) {
      // Tangent frame from uv derivatives.
      auto uv0 = mesh.uvs[tri.x], uv1 = mesh.uvs[tri.y], uv2 = mesh.uvs[tri.z];
      auto du1 = uv1 - uv0, du2 = uv2 - uv0;
      double det = du1.x * du2.y - du1.y * du2.x;
      auto   tangent = std::abs(det) > 1e-12
                           ? normalize(((p1 - p0) * du2.y - (p2 - p0) * du1.y) / det)
                           : basis_from_z(h.normal).x;
      tangent = normalize(tangent - h.normal * dot(h.normal, tangent));
      if (is_zero(tangent)) tangent = basis_from_z(h.normal).x;
      auto bitangent = cross(h.normal, tangent);
      auto local     = sample_normal_map(material, h.uv);
      auto n = normalize(tangent * local.x + bitangent * local.y + h.normal * local.z);
      // Keep the perturbed normal on the geometric side; clamp to grazing.
      constexpr double min_cos = 1e-3;
      double c = dot(n, h.geometric_normal);
      if (c < min_cos) n = normalize(n + h.geometric_normal * (min_cos - c));
      h.normal = n;
    }
    return h;
  }

 private:
  scene_description          desc_;
  std::vector<primitive_ref> prims_;
  bvh_tree                   bvh_;
  bbox3                      bounds_;
  double                     epsilon_ = 1e-4;
};

// Nearest mesh hit with t in (ray.tmin, ray.tmax). Ties in t go to the lower
// primitive index so results match a brute-force scan exactly.
inline surface_hit intersect(const scene& scn, ray3 ray) {
  int            best_prim = -1;
  triangle_isect best{};
  traverse_bvh(scn.bvh(), ray, false, [&](int prim, ray3& r) {
    auto probe = r;
    probe.tmax = std::nextafter(r.tmax, infinity);  // admit exact ties
    auto isect = scn.intersect_primitive(prim, probe);
    if (!isect) return false;
    if (isect->t < r.tmax || (isect->t == r.tmax && prim < best_prim)) {
      best      = *isect;
      best_prim = prim;
      r.tmax    = isect->t;
      return true;
    }
    return false;
  });
  if (best_prim < 0) return {};
  return scn.make_hit(best_prim, ray, best);
}

// Any mesh or lamp box strictly between a and b, excluding an epsilon at each
// end. Windows are openings and never occlude.
inline bool occluded(const scene& scn, vec3 a, vec3 b) {
  auto   delta = b - a;
  double dist  = length(delta);
  double eps   = scn.epsilon();
  if (dist <= 2 * eps) return false;
  auto ray = ray3{a, delta / dist, eps, dist - eps};
  for (auto& l : scn.lights())
    if (auto* lamp = std::get_if<lamp_light>(&l))
      if (intersect_box(*lamp, ray)) return true;
  return traverse_bvh(scn.bvh(), ray, true,
      [&](int prim, ray3& r) { return scn.intersect_primitive(prim, r).has_value(); });
}

// Shadow test toward a light at infinity along `dir` (window samples): true
// when anything blocks the ray from escaping the scene.
inline bool occluded_to_infinity(const scene& scn, vec3 a, vec3 dir) {
  auto ray = ray3{a, dir, scn.epsilon(), infinity};
  for (auto& l : scn.lights())
    if (auto* lamp = std::get_if<lamp_light>(&l))
      if (intersect_box(*lamp, ray)) return true;
  return traverse_bvh(scn.bvh(), ray, true,
      [&](int prim, ray3& r) { return scn.intersect_primitive(prim, r).has_value(); });
}

}  // namespace roomgt
