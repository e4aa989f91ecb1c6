#pragma once

// Scene JSON loader.
//
//   {
//     "materials": [{"id": "wall", "albedo": [r,g,b] | "albedo_map": "a.pfm",
//                    "roughness": 0.8 | "roughness_map": "r.pfm",
//                    "normal_map": "n.ppm", "uv_scale": [1, 1]}],
//     "meshes":    [{"material": "wall", "instance": 3, "light": 0,
//                    "positions": [[x,y,z],...], "indices": [[i,j,k],...],
//                    "normals": [...], "uvs": [[u,v],...]}
//                   | {"material": ..., "obj": "chair.obj"}
//                   | {"material": ..., "box": {"center": [..], "half_extents": [..], "yaw_deg": 0}}
//                   | {"material": ..., "quad": {"corner": [..], "edge_u": [..], "edge_v": [..]}}],
//     "lights":    [{"type": "lamp", "center": [..], "half_extents": [..],
//                    "axes": [[..],[..],[..]], "temperature": 6000, "intensity": 2}
//                   | {"type": "window", "corner": [..], "edge_u": [..], "edge_v": [..],
//                      "envmap": "sky.pfm" | "radiance": [r,g,b], "intensity": 1}],
//     "cameras":   [{"position": [..], "direction": [..] | "look_at": [..],
//                    "up": [0,0,1], "fov": 45, "width": 64, "height": 64}]
//   }
//
// Lengths in meters, colors linear RGB, relative paths resolve against the
// directory of the scene file. Light ids are positions in `lights`.

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "error.hpp"
#include "image.hpp"
#include "scene.hpp"

namespace roomgt {

namespace detail {

using json = nlohmann::json;

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw parse_error(where, "missing required field '" + key + "'");
  return obj.at(key);
}

inline double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw parse_error(where, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw parse_error(where, "non-finite number");
  return v;
}

inline vec3 as_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw parse_error(where, "expected [x, y, z]");
  return {as_number(j[0], where + "[0]"), as_number(j[1], where + "[1]"),
      as_number(j[2], where + "[2]")};
}

inline vec2 as_vec2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw parse_error(where, "expected [u, v]");
  return {as_number(j[0], where + "[0]"), as_number(j[1], where + "[1]")};
}

inline int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw parse_error(where, "expected an integer");
  return j.get<int>();
}

template <typename T, typename F>
std::vector<T> as_array(const json& j, const std::string& where, F&& item) {
  if (!j.is_array()) throw parse_error(where, "expected an array");
  auto out = std::vector<T>{};
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); i++)
    out.push_back(item(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::filesystem::path resolve_path(const std::filesystem::path& base, const json& j,
    const std::string& where) {
  if (!j.is_string()) throw parse_error(where, "expected a path string");
  auto p = std::filesystem::path(j.get<std::string>());
  return p.is_absolute() ? p : base / p;
}

inline camera parse_camera(const json& j, const std::string& where) {
  auto cam     = camera{};
  cam.position = as_vec3(require(j, "position", where), where + ".position");
  if (j.contains("direction"))
    cam.direction = normalize(as_vec3(j["direction"], where + ".direction"));
  else if (j.contains("look_at"))
    cam.direction = normalize(as_vec3(j["look_at"], where + ".look_at") - cam.position);
  else
    throw parse_error(where, "missing required field 'direction' or 'look_at'");
  if (j.contains("up")) cam.up = normalize(as_vec3(j["up"], where + ".up"));
  cam.vfov   = as_number(require(j, "fov", where), where + ".fov");
  cam.width  = as_int(require(j, "width", where), where + ".width");
  cam.height = as_int(require(j, "height", where), where + ".height");
  try {
    validate_camera(cam);
  } catch (const error& e) {
    throw parse_error(where, e.what());
  }
  return cam;
}

inline light parse_light(const json& j, const std::string& where,
    const std::filesystem::path& base) {
  auto type = require(j, "type", where);
  if (!type.is_string()) throw parse_error(where + ".type", "expected a string");
  double intensity = j.contains("intensity") ? as_number(j["intensity"], where + ".intensity") : 1.0;
  try {
    if (type == "lamp") {
      auto axes = frame3{};
      if (j.contains("axes")) {
        auto& a = j["axes"];
        if (!a.is_array() || a.size() != 3) throw parse_error(where + ".axes", "expected 3 axes");
        axes = {normalize(as_vec3(a[0], where + ".axes[0]")),
            normalize(as_vec3(a[1], where + ".axes[1]")),
            normalize(as_vec3(a[2], where + ".axes[2]"))};
      }
      return make_lamp_light(as_vec3(require(j, "center", where), where + ".center"),
          as_vec3(require(j, "half_extents", where), where + ".half_extents"),
          as_number(require(j, "temperature", where), where + ".temperature"), intensity, axes);
    }
    if (type == "window") {
      auto env = environment_map{};
      if (j.contains("envmap")) {
        env.pixels = read_image(resolve_path(base, j["envmap"], where + ".envmap"));
        if (env.pixels.channels == 1) {
          auto rgb3 = image(env.pixels.width, env.pixels.height, 3);
          for (int y = 0; y < rgb3.height; y++)
            for (int x = 0; x < rgb3.width; x++) rgb3.set_rgb(x, y, env.pixels.rgb_at(x, y));
          env.pixels = std::move(rgb3);
        }
      } else if (j.contains("radiance")) {
        env = environment_map::constant(as_vec3(j["radiance"], where + ".radiance"));
      } else {
        throw parse_error(where, "window needs 'envmap' or 'radiance'");
      }
      return make_window_light(as_vec3(require(j, "corner", where), where + ".corner"),
          as_vec3(require(j, "edge_u", where), where + ".edge_u"),
          as_vec3(require(j, "edge_v", where), where + ".edge_v"), std::move(env), intensity);
    }
  } catch (const parse_error&) {
    throw;
  } catch (const io_error&) {
    throw;
  } catch (const error& e) {
    throw parse_error(where, e.what());
  }
  throw parse_error(where + ".type", "unknown light type '" + type.get<std::string>() + "'");
}

inline svbrdf_material parse_material(const json& j, const std::string& where,
    const std::filesystem::path& base) {
  auto m = svbrdf_material{};
  auto id = require(j, "id", where);
  if (!id.is_string()) throw parse_error(where + ".id", "expected a string");
  m.id = id.get<std::string>();
  if (j.contains("albedo")) m.albedo = as_vec3(j["albedo"], where + ".albedo");
  if (j.contains("roughness")) m.roughness = as_number(j["roughness"], where + ".roughness");
  if (j.contains("albedo_map"))
    m.albedo_map = read_image(resolve_path(base, j["albedo_map"], where + ".albedo_map"));
  if (j.contains("roughness_map"))
    m.roughness_map = read_image(resolve_path(base, j["roughness_map"], where + ".roughness_map"));
  if (j.contains("normal_map"))
    m.normal_map = read_image(resolve_path(base, j["normal_map"], where + ".normal_map"));
  if (j.contains("uv_scale")) m.uv_scale = as_vec2(j["uv_scale"], where + ".uv_scale");
  if (min_component(m.albedo) < 0 || max_component(m.albedo) > 1)
    throw parse_error(where + ".albedo", "albedo channels must be in [0, 1]");
  if (m.roughness < 0 || m.roughness > 1)
    throw parse_error(where + ".roughness", "roughness must be in [0, 1]");
  return m;
}

inline triangle_mesh parse_mesh(const json& j, const std::string& where,
    const std::filesystem::path& base, const std::map<std::string, int>& material_ids) {
  auto mesh = triangle_mesh{};
  if (j.contains("obj")) {
    mesh = load_obj(resolve_path(base, j["obj"], where + ".obj"));
  } else if (j.contains("box")) {
    auto& b   = j["box"];
    auto  yaw = b.contains("yaw_deg") ? as_number(b["yaw_deg"], where + ".box.yaw_deg") : 0.0;
    mesh = make_box(as_vec3(require(b, "center", where + ".box"), where + ".box.center"),
        as_vec3(require(b, "half_extents", where + ".box"), where + ".box.half_extents"),
        radians(yaw));
  } else if (j.contains("quad")) {
    auto& q = j["quad"];
    mesh    = make_quad(as_vec3(require(q, "corner", where + ".quad"), where + ".quad.corner"),
        as_vec3(require(q, "edge_u", where + ".quad"), where + ".quad.edge_u"),
        as_vec3(require(q, "edge_v", where + ".quad"), where + ".quad.edge_v"));
  } else {
    mesh.positions = as_array<vec3>(require(j, "positions", where), where + ".positions", as_vec3);
    mesh.triangles = as_array<vec3i>(require(j, "indices", where), where + ".indices",
        [](const json& t, const std::string& w) {
          if (!t.is_array() || t.size() != 3) throw parse_error(w, "expected [i, j, k]");
          return vec3i{as_int(t[0], w + "[0]"), as_int(t[1], w + "[1]"), as_int(t[2], w + "[2]")};
        });
    if (j.contains("normals")) {
      mesh.normals = as_array<vec3>(j["normals"], where + ".normals", as_vec3);
      for (auto& n : mesh.normals) n = normalize(n);
    }
    if (j.contains("uvs")) mesh.uvs = as_array<vec2>(j["uvs"], where + ".uvs", as_vec2);
  }
  auto mat = require(j, "material", where);
  if (!mat.is_string()) throw parse_error(where + ".material", "expected a material id string");
  auto it = material_ids.find(mat.get<std::string>());
  if (it == material_ids.end())
    throw reference_error(mat.get<std::string>(), where + ": unknown material");
  mesh.material = it->second;
  if (j.contains("instance")) mesh.instance_id = as_int(j["instance"], where + ".instance");
  if (j.contains("light")) mesh.light_link = as_int(j["light"], where + ".light");
  try {
    validate_mesh(mesh, where);
  } catch (const parse_error&) {
    throw;
  } catch (const error& e) {
    throw parse_error(where, e.what());
  }
  return mesh;
}

}  // namespace detail

inline scene_description parse_scene_json(const std::string& text,
    const std::filesystem::path& base_dir, const std::string& name = "scene") {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Report the line of the failing byte.
    size_t line = 1;
    for (size_t i = 0; i < std::min(e.byte, text.size()); i++)
      if (text[i] == '\n') line++;
    throw parse_error(name + ":" + std::to_string(line), e.what());
  }
  if (!doc.is_object()) throw parse_error(name, "scene must be a JSON object");

  auto desc = scene_description{};
  auto material_ids = std::map<std::string, int>{};
  if (doc.contains("materials")) {
    auto& arr = doc["materials"];
    if (!arr.is_array()) throw parse_error("materials", "expected an array");
    for (size_t i = 0; i < arr.size(); i++) {
      auto where = "materials[" + std::to_string(i) + "]";
      auto m     = detail::parse_material(arr[i], where, base_dir);
      if (!material_ids.emplace(m.id, int(desc.materials.size())).second)
        throw parse_error(where + ".id", "duplicate material id '" + m.id + "'");
      desc.materials.push_back(std::move(m));
    }
  }
  if (doc.contains("lights")) {
    auto& arr = doc["lights"];
    if (!arr.is_array()) throw parse_error("lights", "expected an array");
    for (size_t i = 0; i < arr.size(); i++)
      desc.lights.push_back(
          detail::parse_light(arr[i], "lights[" + std::to_string(i) + "]", base_dir));
  }
  if (doc.contains("meshes")) {
    auto& arr = doc["meshes"];
    if (!arr.is_array()) throw parse_error("meshes", "expected an array");
    for (size_t i = 0; i < arr.size(); i++) {
      auto where = "meshes[" + std::to_string(i) + "]";
      auto mesh  = detail::parse_mesh(arr[i], where, base_dir, material_ids);
      if (mesh.light_link && (*mesh.light_link < 0 || *mesh.light_link >= int(desc.lights.size())))
        throw reference_error(std::to_string(*mesh.light_link), where + ": unknown light");
      desc.meshes.push_back(std::move(mesh));
    }
  }
  if (doc.contains("cameras")) {
    auto& arr = doc["cameras"];
    if (!arr.is_array()) throw parse_error("cameras", "expected an array");
    for (size_t i = 0; i < arr.size(); i++)
      desc.cameras.push_back(detail::parse_camera(arr[i], "cameras[" + std::to_string(i) + "]"));
  }
  return desc;
}

inline scene load_scene(const std::filesystem::path& path) {
  auto text = read_binary(path);
  return scene(parse_scene_json(text, path.parent_path(), path.string()));
}

}  // namespace roomgt
