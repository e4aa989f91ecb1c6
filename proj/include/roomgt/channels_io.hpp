#pragma once

// Writes a channel_set as PFM files plus `manifest.json`, which names every
// file with its semantic role and light id so consumers never parse names.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "image.hpp"
#include "integrator.hpp"

namespace roomgt {

inline constexpr const char* envmap_frame_description =
    "local shading frame: z = shading normal, x/y from the branchless orthonormal basis "
    "of the normal; theta rows uniform in cos(theta) starting at the normal, phi columns "
    "counter-clockwise from +x; texel values are mean incoming radiance";

inline nlohmann::json envmap_manifest(const envmap_grid& grid, const std::string& name,
    const std::string& file) {
  return {{"name", name}, {"file", file}, {"semantic", name}, {"stride", grid.stride},
      {"theta", grid.theta}, {"phi", grid.phi}, {"rows", grid.rows}, {"cols", grid.cols},
      {"pixel_x", grid.pixel_x}, {"pixel_y", grid.pixel_y},
      {"texel_solid_angle", grid.texel_solid_angle()}, {"frame", envmap_frame_description}};
}

// Writes every populated channel into `dir` and returns the manifest.
inline nlohmann::json write_channels(const channel_set& channels,
    const std::filesystem::path& dir, const render_config& config, bool preview = false) {
  std::filesystem::create_directories(dir);
  auto entries = nlohmann::json::array();
  auto emit    = [&](const image& img, const std::string& name, const std::string& semantic,
                  std::optional<int> light_id) {
    if (img.empty()) return;
    auto file = name + ".pfm";
    write_pfm(img, dir / file);
    auto entry = nlohmann::json{{"name", name}, {"file", file}, {"semantic", semantic},
        {"channels", img.channels}, {"light_id", nullptr}};
    if (light_id) entry["light_id"] = *light_id;
    entries.push_back(entry);
  };
  emit(channels.radiance, "radiance", "radiance", {});
  emit(channels.direct, "direct", "direct_shading", {});
  emit(channels.albedo, "albedo", "albedo", {});
  emit(channels.normal, "normal", "normal_camera_space", {});
  emit(channels.depth, "depth", "depth_meters", {});
  emit(channels.roughness, "roughness", "roughness", {});
  emit(channels.instance, "instance", "instance_id", {});
  emit(channels.light_mask, "light_mask", "light_id_plus_one", {});
  for (auto& pl : channels.per_light) {
    auto id = std::to_string(pl.light_id);
    emit(pl.direct_occluded, "light" + id + "_direct", "direct_shading_occluded", pl.light_id);
    emit(pl.direct_unoccluded, "light" + id + "_direct_unoccluded", "direct_shading_unoccluded",
        pl.light_id);
    emit(pl.visibility, "light" + id + "_visibility", "visibility", pl.light_id);
  }
  auto envmaps = nlohmann::json::array();
  if (channels.envmap_direct) {
    write_pfm(channels.envmap_direct->texels, dir / "envmap_direct.pfm");
    envmaps.push_back(envmap_manifest(*channels.envmap_direct, "envmap_direct", "envmap_direct.pfm"));
  }
  if (channels.envmap_full) {
    write_pfm(channels.envmap_full->texels, dir / "envmap_full.pfm");
    envmaps.push_back(envmap_manifest(*channels.envmap_full, "envmap_full", "envmap_full.pfm"));
  }
  if (preview && !channels.radiance.empty())
    write_ppm_preview(channels.radiance, dir / "radiance_preview.ppm");

  auto manifest = nlohmann::json{{"width", channels.width}, {"height", channels.height},
      {"seed", config.seed}, {"spp", config.spp}, {"max_bounces", config.max_bounces},
      {"direct_only", config.direct_only}, {"channels", entries}, {"envmaps", envmaps},
      {"normal_encoding", "camera space xyz, x right, y up, z toward the camera; zero on background"},
      {"background", {{"depth", 0}, {"instance", -1}, {"light_mask", 0}}}};
  write_binary(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace roomgt
