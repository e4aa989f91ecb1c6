#pragma once

// Friction coefficients from appearance. A material is rendered as a virtual
// reflectance disk (parabolic mirror view of the hemisphere under a narrow
// light cone around the normal), summarized by a radial log profile, and
// matched against user-supplied anchor materials on a grid over
// (gray albedo, roughness).

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "brdf.hpp"
#include "image.hpp"
#include "integrator.hpp"
#include "parallel.hpp"

namespace roomgt {

inline constexpr double disk_light_cone_deg = 5;
inline constexpr int    descriptor_size     = 64;

using disk_descriptor_t = std::array<double, descriptor_size>;

struct reflectance_disk {
  image  pixels;  // 1 channel, square, zero outside the inscribed disk
  double albedo    = 0;  // gray
  double roughness = 0;
};

// Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> gl8_nodes = {-0.9602898564975363, -0.7966664774136267,
    -0.5255324099163290, -0.1834346424956498, 0.1834346424956498, 0.5255324099163290,
    0.7966664774136267, 0.9602898564975363};
inline constexpr std::array<double, 8> gl8_weights = {0.1012285362903763, 0.2223810344533745,
    0.3137066458778873, 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};
inline constexpr int disk_cone_azimuths = 32;

// Mean of f(view, l) * cos(theta_l) over light directions uniform in the
// cone around the normal. Light azimuths are placed relative to the view
// azimuth so the result is exactly rotation invariant.
inline double disk_value(const microfacet_params& params, vec3 view) {
  double cos_max = std::cos(radians(disk_light_cone_deg));
  double phi_v   = std::atan2(view.y, view.x);
  double total   = 0;
  for (size_t i = 0; i < gl8_nodes.size(); i++) {
    double cos_t = (1 + cos_max) / 2 + (1 - cos_max) / 2 * gl8_nodes[i];
    double sin_t = std::sqrt(std::max(0.0, 1 - cos_t * cos_t));
    for (int k = 0; k < disk_cone_azimuths; k++) {
      double phi   = phi_v + (k + 0.5) * 2 * pi / disk_cone_azimuths;
      auto   light = vec3{sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t};
      auto   f     = eval_brdf(params, {{0, 0, 1}, view, light});
      total += gl8_weights[i] / 2 * f.x * cos_t / disk_cone_azimuths;
    }
  }
  return total;
}

// View direction for normalized disk coordinates (u, v) in [-1, 1]^2.
// Radius r = tan(theta / 2); azimuth is preserved.
inline vec3 disk_direction(double u, double v) {
  double r     = std::sqrt(u * u + v * v);
  double theta = 2 * std::atan(r);
  double phi   = std::atan2(v, u);
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline reflectance_disk render_reflectance_disk(double albedo, double roughness, int resolution,
    double f0 = default_f0) {
  if (resolution < 16) throw error("disk resolution must be >= 16");
  auto disk   = reflectance_disk{image(resolution, resolution, 1), albedo, roughness};
  auto params = microfacet_params{{albedo, albedo, albedo}, roughness, f0};
  for (int y = 0; y < resolution; y++) {
    for (int x = 0; x < resolution; x++) {
      double u = (x + 0.5) / resolution * 2 - 1, v = (y + 0.5) / resolution * 2 - 1;
      if (u * u + v * v > 1) continue;
      disk.pixels.at(x, y) = float(disk_value(params, disk_direction(u, v)));
    }
  }
  return disk;
}

// Radial profile of log(1 + intensity), azimuthal mean per bin, unit L2 norm.
inline disk_descriptor_t disk_descriptor(const reflectance_disk& disk) {
  auto sums   = disk_descriptor_t{};
  auto counts = std::array<int, descriptor_size>{};
  int  w = disk.pixels.width, h = disk.pixels.height;
  for (int y = 0; y < h; y++) {
    for (int x = 0; x < w; x++) {
      double u = (x + 0.5) / w * 2 - 1, v = (y + 0.5) / h * 2 - 1;
      double r = std::sqrt(u * u + v * v);
      if (r > 1) continue;
      int bin = std::min(descriptor_size - 1, int(r * descriptor_size));
      sums[bin] += std::log1p(std::max(0.0, double(disk.pixels.at(x, y))));
      counts[bin]++;
    }
  }
  double norm = 0;
  for (int b = 0; b < descriptor_size; b++) {
    if (counts[b] > 0) sums[b] /= counts[b];
    norm += sums[b] * sums[b];
  }
  if (norm > 0)
    for (auto& s : sums) s /= std::sqrt(norm);
  return sums;
}

inline double descriptor_distance(const disk_descriptor_t& a, const disk_descriptor_t& b) {
  double d = 0;
  for (int i = 0; i < descriptor_size; i++) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

struct friction_anchor {
  std::string name;
  double      albedo    = 0;  // gray
  double      roughness = 0;
  double      mu        = 0;
};

// Reference materials with measured coefficients.
inline std::vector<friction_anchor> default_friction_anchors() {
  return {{"wood", 0.4, 0.6, 0.76}, {"wax", 0.6, 2.0 / 15, 0.31}, {"carpet", 1.0 / 3, 14.0 / 15, 0.76}};
}

struct friction_table {
  std::vector<double>            albedo_axis;
  std::vector<double>            roughness_axis;
  std::vector<double>            mu;           // [albedo index][roughness index]
  std::vector<disk_descriptor_t> descriptors;  // same layout as mu
  int                            resolution = 64;

  double node_mu(int ia, int ir) const { return mu[size_t(ia) * roughness_axis.size() + ir]; }
};

inline std::vector<double> linspace(double a, double b, int n) {
  auto v = std::vector<double>(n);
  for (int i = 0; i < n; i++) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

inline void validate_axis(const std::vector<double>& axis, const std::string& name) {
  if (axis.empty()) throw error(name + " axis is empty");
  for (size_t i = 0; i < axis.size(); i++) {
    if (axis[i] < 0 || axis[i] > 1) throw error(name + " axis values must be in [0, 1]");
    if (i > 0 && !(axis[i] > axis[i - 1])) throw error(name + " axis must be strictly increasing");
  }
}

inline friction_table build_friction_table(const std::vector<friction_anchor>& anchors,
    std::vector<double> albedo_axis = linspace(0, 1, 16),
    std::vector<double> roughness_axis = linspace(0, 1, 16), int resolution = 64,
    int threads = 0) {
  if (anchors.empty()) throw error("friction table needs at least one anchor");
  for (auto& a : anchors)
    if (a.mu < 0 || a.mu > 1) throw error("anchor '" + a.name + "' has mu outside [0, 1]");
  validate_axis(albedo_axis, "albedo");
  validate_axis(roughness_axis, "roughness");

  auto anchor_desc = std::vector<disk_descriptor_t>(anchors.size());
  for (size_t i = 0; i < anchors.size(); i++)
    anchor_desc[i] = disk_descriptor(
        render_reflectance_disk(anchors[i].albedo, anchors[i].roughness, resolution));

  auto table           = friction_table{};
  table.albedo_axis    = std::move(albedo_axis);
  table.roughness_axis = std::move(roughness_axis);
  table.resolution     = resolution;
  int na = int(table.albedo_axis.size()), nr = int(table.roughness_axis.size());
  table.mu.resize(size_t(na) * nr);
  table.descriptors.resize(size_t(na) * nr);
  parallel_for(na * nr, resolve_threads(threads), [&](int node) {
    int ia = node / nr, ir = node % nr;
    auto desc = disk_descriptor(
        render_reflectance_disk(table.albedo_axis[ia], table.roughness_axis[ir], resolution));
    size_t best   = 0;
    double best_d = infinity;
    for (size_t i = 0; i < anchors.size(); i++) {
      double d = descriptor_distance(desc, anchor_desc[i]);
      if (d < best_d) {
        best_d = d;
        best   = i;
      }
    }
    table.descriptors[node] = desc;
    table.mu[node]          = anchors[best].mu;
  });
  return table;
}

enum class friction_lookup { nearest, bilinear };

namespace detail {

// Nearest index on a sorted axis; ties go to the lower index.
inline int nearest_index(const std::vector<double>& axis, double v) {
  int best = 0;
  for (int i = 1; i < int(axis.size()); i++)
    if (std::abs(axis[i] - v) < std::abs(axis[best] - v)) best = i;
  return best;
}

// Interval [i, i + 1] containing v (clamped) and the fraction within it.
inline std::pair<int, double> axis_interval(const std::vector<double>& axis, double v) {
  int n = int(axis.size());
  if (n == 1 || v <= axis.front()) return {0, 0.0};
  if (v >= axis.back()) return {n - 2, 1.0};
  int i = int(std::upper_bound(axis.begin(), axis.end(), v) - axis.begin()) - 1;
  return {i, (v - axis[i]) / (axis[i + 1] - axis[i])};
}

}  // namespace detail

inline double lookup_friction(const friction_table& table, double albedo, double roughness,
    friction_lookup mode = friction_lookup::nearest) {
  if (mode == friction_lookup::nearest)
    return table.node_mu(detail::nearest_index(table.albedo_axis, albedo),
        detail::nearest_index(table.roughness_axis, roughness));
  auto [ia, fa] = detail::axis_interval(table.albedo_axis, albedo);
  auto [ir, fr] = detail::axis_interval(table.roughness_axis, roughness);
  int  ia1 = std::min(ia + 1, int(table.albedo_axis.size()) - 1);
  int  ir1 = std::min(ir + 1, int(table.roughness_axis.size()) - 1);
  // Exact node values at the corners of the cell.
  if (fa == 0 && fr == 0) return table.node_mu(ia, ir);
  double m00 = table.node_mu(ia, ir), m01 = table.node_mu(ia, ir1);
  double m10 = table.node_mu(ia1, ir), m11 = table.node_mu(ia1, ir1);
  return (1 - fa) * ((1 - fr) * m00 + fr * m01) + fa * ((1 - fr) * m10 + fr * m11);
}

inline double lookup_friction(const friction_table& table, const microfacet_params& params,
    friction_lookup mode = friction_lookup::nearest) {
  return lookup_friction(table, mean(params.albedo), params.roughness, mode);
}

// Per-pixel coefficient of the first visible surface; 0 elsewhere.
inline image friction_map(const scene& scn, const camera& cam, const friction_table& table,
    friction_lookup mode = friction_lookup::nearest, int threads = 0) {
  validate_camera(cam);
  auto out = image(cam.width, cam.height, 1);
  parallel_for_pixels(cam.width, cam.height, resolve_threads(threads), [&](int x, int y) {
    auto ray = camera_ray(cam, x + 0.5, y + 0.5);
    auto hit = trace(scn, ray);
    if (hit.what != trace_hit::kind::surface) return;
    auto params = sample_material(scn.materials()[hit.surface.material], hit.surface.uv);
    out.at(x, y) = float(lookup_friction(table, params, mode));
  });
  return out;
}

// -----------------------------------------------------------------------------
// JSON
// -----------------------------------------------------------------------------

inline nlohmann::json friction_table_to_json(const friction_table& table) {
  auto j = nlohmann::json{{"albedo_axis", table.albedo_axis},
      {"roughness_axis", table.roughness_axis}, {"resolution", table.resolution}};
  auto mu   = nlohmann::json::array();
  auto desc = nlohmann::json::array();
  for (size_t ia = 0; ia < table.albedo_axis.size(); ia++) {
    auto row = nlohmann::json::array();
    for (size_t ir = 0; ir < table.roughness_axis.size(); ir++) {
      row.push_back(table.node_mu(int(ia), int(ir)));
      desc.push_back(table.descriptors[ia * table.roughness_axis.size() + ir]);
    }
    mu.push_back(row);
  }
  j["mu"]          = mu;
  j["descriptors"] = desc;
  return j;
}

inline friction_table friction_table_from_json(const nlohmann::json& j,
    const std::string& where = "friction table") {
  try {
    auto table           = friction_table{};
    table.albedo_axis    = j.at("albedo_axis").get<std::vector<double>>();
    table.roughness_axis = j.at("roughness_axis").get<std::vector<double>>();
    table.resolution     = j.value("resolution", 64);
    validate_axis(table.albedo_axis, "albedo");
    validate_axis(table.roughness_axis, "roughness");
    auto& mu = j.at("mu");
    if (mu.size() != table.albedo_axis.size()) throw parse_error(where + ".mu", "row count mismatch");
    for (auto& row : mu) {
      if (row.size() != table.roughness_axis.size())
        throw parse_error(where + ".mu", "column count mismatch");
      for (auto& v : row) {
        double m = v.get<double>();
        if (m < 0 || m > 1) throw parse_error(where + ".mu", "values must be in [0, 1]");
        table.mu.push_back(m);
      }
    }
    if (j.contains("descriptors"))
      for (auto& d : j["descriptors"]) table.descriptors.push_back(d.get<disk_descriptor_t>());
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(where, e.what());
  }
}

inline std::vector<friction_anchor> friction_anchors_from_json(const nlohmann::json& j,
    const std::string& where = "anchors") {
  if (!j.is_array()) throw parse_error(where, "expected an array of anchors");
  auto anchors = std::vector<friction_anchor>{};
  try {
    for (auto& a : j)
      anchors.push_back({a.value("name", std::string{}), a.at("albedo").get<double>(),
          a.at("roughness").get<double>(), a.at("mu").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(where, e.what());
  }
  return anchors;
}

}  // namespace roomgt
