#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "math.hpp"

namespace roomgt {

// Triangle soup with optional per-vertex normals and uvs. An empty `normals`
// array means shading normals fall back to the face normal.
struct triangle_mesh {
  std::vector<vec3>  positions;
  std::vector<vec3>  normals;
  std::vector<vec2>  uvs;
  std::vector<vec3i> triangles;
  int                material    = 0;
  int                instance_id = 0;
  std::optional<int> light_link  = std::nullopt;

  bbox3 bounds() const {
    auto b = bbox3{};
    for (auto& p : positions) b.expand(p);
    return b;
  }
};

// Throws with `name` in the message when an invariant does not hold.
inline void validate_mesh(const triangle_mesh& mesh, const std::string& name) {
  if (mesh.triangles.empty()) throw error(name + ": mesh has no triangles");
  for (auto& p : mesh.positions)
    if (!isfinite(p)) throw error(name + ": non-finite vertex position");
  if (!mesh.normals.empty()) {
    if (mesh.normals.size() != mesh.positions.size())
      throw error(name + ": normals count does not match positions");
    for (auto& n : mesh.normals)
      if (!isfinite(n) || std::abs(length(n) - 1) > 1e-4)
        throw error(name + ": normals must be unit length");
  }
  if (!mesh.uvs.empty() && mesh.uvs.size() != mesh.positions.size())
    throw error(name + ": uvs count does not match positions");
  auto count = int(mesh.positions.size());
  for (auto& t : mesh.triangles)
    for (int k = 0; k < 3; k++)
      if (t[k] < 0 || t[k] >= count) throw error(name + ": triangle index out of range");
}

// Axis-aligned quad from `corner` spanning `eu` and `ev`; faces cross(eu, ev).
inline triangle_mesh make_quad(vec3 corner, vec3 eu, vec3 ev, int material = 0) {
  auto mesh      = triangle_mesh{};
  auto n         = normalize(cross(eu, ev));
  mesh.positions = {corner, corner + eu, corner + eu + ev, corner + ev};
  mesh.normals   = {n, n, n, n};
  mesh.uvs       = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  mesh.material  = material;
  return mesh;
}

inline void append_mesh(triangle_mesh& dst, const triangle_mesh& src) {
  auto offset = int(dst.positions.size());
  dst.positions.insert(dst.positions.end(), src.positions.begin(), src.positions.end());
  dst.normals.insert(dst.normals.end(), src.normals.begin(), src.normals.end());
  dst.uvs.insert(dst.uvs.end(), src.uvs.begin(), src.uvs.end());
  for (auto t : src.triangles)
    dst.triangles.push_back({t.x + offset, t.y + offset, t.z + offset});
}

// Closed box with outward faces, rotated by `yaw` radians about +z.
inline triangle_mesh make_box(vec3 center, vec3 half, double yaw = 0, int material = 0) {
  auto c = std::cos(yaw), s = std::sin(yaw);
  auto ax = vec3{c, s, 0} * half.x, ay = vec3{-s, c, 0} * half.y, az = vec3{0, 0, 1} * half.z;
  auto mesh = triangle_mesh{};
  // Each face: corner plus two edges ordered so cross(eu, ev) points out.
  append_mesh(mesh, make_quad(center - ax - ay - az, ay * 2, ax * 2));  // -z
  append_mesh(mesh, make_quad(center - ax - ay + az, ax * 2, ay * 2));  // +z
  append_mesh(mesh, make_quad(center - ax - ay - az, ax * 2, az * 2));  // -y
  append_mesh(mesh, make_quad(center - ax + ay - az, az * 2, ax * 2));  // +y
  append_mesh(mesh, make_quad(center - ax - ay - az, az * 2, ay * 2));  // -x
  append_mesh(mesh, make_quad(center + ax - ay - az, ay * 2, az * 2));  // +x
  mesh.material = material;
  return mesh;
}

// OBJ subset: v / vt / vn / f with triangles (polygons are fan-split).
// Negative (relative) indices are supported.
inline triangle_mesh load_obj(const std::filesystem::path& path) {
  auto fs = std::ifstream(path);
  if (!fs) throw io_error("cannot open " + path.string());
  auto positions = std::vector<vec3>{};
  auto normals   = std::vector<vec3>{};
  auto uvs       = std::vector<vec2>{};
  auto mesh      = triangle_mesh{};
  auto vertex_map = std::map<std::tuple<int, int, int>, int>{};
  bool has_uv = false, has_normal = false, missing_uv = false, missing_normal = false;
  auto where = [&](int line) { return path.string() + ":" + std::to_string(line); };

  auto resolve = [&](int idx, size_t count, int line) {
    int r = idx > 0 ? idx - 1 : int(count) + idx;
    if (idx == 0 || r < 0 || r >= int(count)) throw parse_error(where(line), "index out of range");
    return r;
  };

  auto line_text = std::string{};
  int  line_no   = 0;
  while (std::getline(fs, line_text)) {
    line_no++;
    auto ls  = std::istringstream(line_text);
    auto tag = std::string{};
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) throw parse_error(where(line_no), "bad vertex");
      positions.push_back(p);
    } else if (tag == "vt") {
      vec2 t;
      if (!(ls >> t.x >> t.y)) throw parse_error(where(line_no), "bad texcoord");
      uvs.push_back(t);
    } else if (tag == "vn") {
      vec3 n;
      if (!(ls >> n.x >> n.y >> n.z)) throw parse_error(where(line_no), "bad normal");
      normals.push_back(normalize(n));
    } else if (tag == "f") {
      auto face = std::vector<int>{};
      auto tok  = std::string{};
      while (ls >> tok) {
        int vi = 0, ti = 0, ni = 0;
        auto s1 = tok.find('/');
        try {
          if (s1 == std::string::npos) {
            vi = std::stoi(tok);
          } else {
            vi      = std::stoi(tok.substr(0, s1));
            auto s2 = tok.find('/', s1 + 1);
            auto ts = tok.substr(s1 + 1, s2 == std::string::npos ? std::string::npos : s2 - s1 - 1);
            if (!ts.empty()) ti = std::stoi(ts);
            if (s2 != std::string::npos) ni = std::stoi(tok.substr(s2 + 1));
          }
        } catch (const std::exception&) {
          throw parse_error(where(line_no), "bad face token '" + tok + "'");
        }
        auto key = std::tuple{resolve(vi, positions.size(), line_no),
            ti ? resolve(ti, uvs.size(), line_no) : -1,
            ni ? resolve(ni, normals.size(), line_no) : -1};
        if (std::get<1>(key) >= 0) has_uv = true; else missing_uv = true;
        if (std::get<2>(key) >= 0) has_normal = true; else missing_normal = true;
        auto it = vertex_map.find(key);
        if (it == vertex_map.end()) {
          it = vertex_map.emplace(key, int(mesh.positions.size())).first;
          mesh.positions.push_back(positions[std::get<0>(key)]);
          mesh.uvs.push_back(std::get<1>(key) >= 0 ? uvs[std::get<1>(key)] : vec2{});
          mesh.normals.push_back(std::get<2>(key) >= 0 ? normals[std::get<2>(key)] : vec3{});
        }
        face.push_back(it->second);
      }
      if (face.size() < 3) throw parse_error(where(line_no), "face with fewer than 3 vertices");
      for (size_t k = 1; k + 1 < face.size(); k++)
        mesh.triangles.push_back({face[0], face[k], face[k + 1]});
    }
    // Other statements (o, g, s, usemtl, mtllib) are ignored.
  }
  if (!has_uv || missing_uv) mesh.uvs.clear();
  if (!has_normal || missing_normal) mesh.normals.clear();
  return mesh;
}

}  // namespace roomgt
