#pragma once

// Single-link URDF for a rigid object: visual mesh, box collision fallback,
// solid-box inertia, and one lateral friction coefficient looked up from the
// object's material.

#include <cstdio>
#include <string>

#include "friction.hpp"
#include "material.hpp"
#include "mesh.hpp"

namespace roomgt {

struct urdf_object {
  std::string     name = "object";
  triangle_mesh   mesh;
  svbrdf_material material;
  double          mass = 1;
  std::string     visual_path;
  std::string     collision_path;  // empty: axis-aligned bounding box
};

// Solid box inertia about the center, diagonal (ixx, iyy, izz).
inline vec3 box_inertia(double mass, vec3 size) {
  return {mass / 12 * (size.y * size.y + size.z * size.z),
      mass / 12 * (size.x * size.x + size.z * size.z),
      mass / 12 * (size.x * size.x + size.y * size.y)};
}

// Mean coefficient over the material's texels (the larger of its albedo and
// roughness maps), or the single constant lookup.
inline double material_friction(const svbrdf_material& material, const friction_table& table,
    friction_lookup mode = friction_lookup::nearest) {
  int w = 1, h = 1;
  for (auto* map : {&material.albedo_map, &material.roughness_map})
    if (*map && size_t((*map)->width) * (*map)->height > size_t(w) * h) {
      w = (*map)->width;
      h = (*map)->height;
    }
  double total = 0;
  for (int y = 0; y < h; y++)
    for (int x = 0; x < w; x++) {
      auto uv = vec2{(x + 0.5) / w, (y + 0.5) / h};
      // Texel centers in texture space, independent of uv_scale.
      auto params = sample_material(
          svbrdf_material{material.id, material.albedo, material.roughness, material.albedo_map,
              material.roughness_map, std::nullopt, {1, 1}},
          uv);
      total += lookup_friction(table, params, mode);
    }
  return total / (double(w) * h);
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
  auto out = std::string{};
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v == 0 ? 0.0 : v);
  return buf;
}

inline std::string fmt_vec(vec3 v) {
  return fmt_number(v.x) + " " + fmt_number(v.y) + " " + fmt_number(v.z);
}

}  // namespace detail

inline std::string export_urdf(const urdf_object& object, const friction_table& table,
    friction_lookup mode = friction_lookup::nearest) {
  using detail::fmt_number, detail::fmt_vec, detail::xml_escape;
  if (!(object.mass > 0)) throw error("mass must be > 0");
  validate_mesh(object.mesh, object.name);
  auto bounds = object.mesh.bounds();
  auto size   = bounds.extent();
  if (!(size.x > 0 && size.y > 0 && size.z > 0))
    throw error("mesh '" + object.name + "' is degenerate (zero extent)");
  auto   center   = bounds.center();
  auto   inertia  = box_inertia(object.mass, size);
  double friction = material_friction(object.material, table, mode);
  auto   name     = xml_escape(object.name);

  auto xml = std::string{};
  xml += "<?xml version=\"1.0\"?>\n";
  xml += "<robot name=\"" + name + "\">\n";
  xml += "  <link name=\"" + name + "_link\">\n";
  xml += "    <contact>\n";
  xml += "      <lateral_friction value=\"" + fmt_number(friction) + "\"/>\n";
  xml += "    </contact>\n";
  xml += "    <inertial>\n";
  xml += "      <origin xyz=\"" + fmt_vec(center) + "\" rpy=\"0 0 0\"/>\n";
  xml += "      <mass value=\"" + fmt_number(object.mass) + "\"/>\n";
  xml += "      <inertia ixx=\"" + fmt_number(inertia.x) + "\" ixy=\"0\" ixz=\"0\" iyy=\"" +
         fmt_number(inertia.y) + "\" iyz=\"0\" izz=\"" + fmt_number(inertia.z) + "\"/>\n";
  xml += "    </inertial>\n";
  xml += "    <visual>\n";
  xml += "      <origin xyz=\"0 0 0\" rpy=\"0 0 0\"/>\n";
  xml += "      <geometry>\n";
  xml += "        <mesh filename=\"" + xml_escape(object.visual_path) + "\"/>\n";
  xml += "      </geometry>\n";
  xml += "    </visual>\n";
  xml += "    <collision>\n";
  if (object.collision_path.empty()) {
    xml += "      <origin xyz=\"" + fmt_vec(center) + "\" rpy=\"0 0 0\"/>\n";
    xml += "      <geometry>\n";
    xml += "        <box size=\"" + fmt_vec(size) + "\"/>\n";
  } else {
    xml += "      <origin xyz=\"0 0 0\" rpy=\"0 0 0\"/>\n";
    xml += "      <geometry>\n";
    xml += "        <mesh filename=\"" + xml_escape(object.collision_path) + "\"/>\n";
  }
  xml += "      </geometry>\n";
  xml += "    </collision>\n";
  xml += "  </link>\n";
  xml += "</robot>\n";
  return xml;
}

}  // namespace roomgt
