#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input rejected
// while running, 2 usage error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roomgt/roomgt.hpp"

namespace roomgt::cli {

inline constexpr int exit_ok    = 0;
inline constexpr int exit_input = 1;
inline constexpr int exit_usage = 2;

namespace detail {

inline void write_json(const nlohmann::json& j, const std::string& out) {
  auto text = j.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    auto path = std::filesystem::path(out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_binary(path, text);
  }
}

inline nlohmann::json read_json(const std::string& path) {
  auto text = read_binary(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path, e.what());
  }
}

inline camera pick_camera(const scene& scn, int index, int width, int height) {
  if (index < 0 || index >= int(scn.cameras().size()))
    throw error("camera index " + std::to_string(index) + " is not in the scene");
  auto cam = scn.cameras()[index];
  if (width > 0) cam.width = width;
  if (height > 0) cam.height = height;
  validate_camera(cam);
  return cam;
}

inline friction_lookup parse_mode(const std::string& mode) {
  return mode == "bilinear" ? friction_lookup::bilinear : friction_lookup::nearest;
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
  auto app = CLI::App{"Ground-truth rendering and scene preparation for indoor rooms", "roomgt"};
  app.require_subcommand(1);

  // Shared rendering options.
  struct render_args {
    std::string scene;
    std::string out;
    int         spp     = 16;
    int         bounces = 7;
    uint64_t    seed    = 0;
    int         threads = 0;
    int         camera  = 0;
    int         width = 0, height = 0;
  };
  auto add_render_options = [](CLI::App* cmd, render_args& a) {
    cmd->add_option("--scene", a.scene, "scene JSON")->required();
    cmd->add_option("--out", a.out, "output directory")->required();
    cmd->add_option("--spp", a.spp, "samples per pixel");
    cmd->add_option("--bounces", a.bounces, "maximum bounces");
    cmd->add_option("--seed", a.seed, "random seed");
    cmd->add_option("--threads", a.threads, "worker threads (0: OR_THREADS or all cores)");
    cmd->add_option("--camera", a.camera, "camera index in the scene");
    cmd->add_option("--width", a.width, "override image width");
    cmd->add_option("--height", a.height, "override image height");
  };

  auto render_a = render_args{};
  bool preview = false, direct_only = false;
  auto* render_cmd = app.add_subcommand("render", "HDR radiance and G-buffer channels");
  add_render_options(render_cmd, render_a);
  render_cmd->add_flag("--preview", preview, "also write an 8-bit gamma 2.2 preview");
  render_cmd->add_flag("--direct-only", direct_only, "no inter-reflection");

  auto channels_a = render_args{};
  int  stride = 4, theta = 8, phi = 16, texel_spp = 64;
  int  light_filter = -1;
  bool no_envmaps = false;
  auto* channels_cmd = app.add_subcommand("channels",
      "full ground-truth stack: radiance, G-buffer, per-light shading, visibility, envmaps");
  add_render_options(channels_cmd, channels_a);
  channels_cmd->add_option("--stride", stride, "envmap pixel stride");
  channels_cmd->add_option("--theta", theta, "envmap theta bins");
  channels_cmd->add_option("--phi", phi, "envmap phi bins");
  channels_cmd->add_option("--texel-spp", texel_spp, "envmap samples per texel");
  channels_cmd->add_option("--light", light_filter, "per-light channels for this light id only");
  channels_cmd->add_flag("--no-envmaps", no_envmaps, "skip per-pixel envmaps");

  std::string views_scene, views_layout, views_out;
  int         views_k = 0, views_threads = 0;
  auto        views_opts = wall_view_options{};
  auto* views_cmd = app.add_subcommand("select-views", "sample wall views and rank them");
  views_cmd->add_option("--scene", views_scene, "scene JSON")->required();
  views_cmd->add_option("--layout", views_layout, "layout JSON")->required();
  views_cmd->add_option("--out", views_out, "output JSON (default stdout)");
  views_cmd->add_option("--k", views_k, "keep the top k (default all)");
  views_cmd->add_option("--spacing", views_opts.spacing, "meters between views");
  views_cmd->add_option("--camera-height", views_opts.camera_height, "meters above the floor");
  views_cmd->add_option("--inset", views_opts.inset, "meters from the wall");
  views_cmd->add_option("--fov", views_opts.fov, "vertical field of view, degrees");
  views_cmd->add_option("--threads", views_threads, "worker threads");

  std::string fit_cloud, fit_out;
  double      fit_threshold = 0.02, fit_cell = 0.05, fit_segment = 0.5, fit_height = 3;
  int         fit_iterations = 1000, fit_min_points = 20;
  uint64_t    fit_seed = 0;
  auto* fit_cmd = app.add_subcommand("fit-layout", "floor plane, outline and openings from a point cloud");
  fit_cmd->add_option("--cloud", fit_cloud, "ASCII point cloud: x y z [label]")->required();
  fit_cmd->add_option("--out", fit_out, "output JSON (default stdout)");
  fit_cmd->add_option("--threshold", fit_threshold, "RANSAC inlier distance, meters");
  fit_cmd->add_option("--iterations", fit_iterations, "RANSAC iterations");
  fit_cmd->add_option("--seed", fit_seed, "RANSAC seed");
  fit_cmd->add_option("--cell", fit_cell, "occupancy cell size, meters");
  fit_cmd->add_option("--segment-width", fit_segment, "opening bin width, meters");
  fit_cmd->add_option("--min-points", fit_min_points, "points needed to keep an opening bin");
  fit_cmd->add_option("--room-height", fit_height, "room height, meters");

  std::string eval_pred, eval_gt, eval_out;
  double      eval_scale = 100;
  auto* eval_cmd = app.add_subcommand("eval-layout", "corner, edge and IoU metrics");
  eval_cmd->add_option("--pred", eval_pred, "predicted layout JSON")->required();
  eval_cmd->add_option("--gt", eval_gt, "ground-truth layout JSON")->required();
  eval_cmd->add_option("--scale", eval_scale, "pixels per meter");
  eval_cmd->add_option("--out", eval_out, "output JSON (default stdout)");

  std::string table_anchors, table_out;
  int         table_grid = 16, table_resolution = 64, table_threads = 0;
  auto* table_cmd = app.add_subcommand("friction-table", "build the appearance-to-friction table");
  table_cmd->add_option("--anchors", table_anchors,
      "anchor JSON [{name, albedo, roughness, mu}] (default: wood, wax, carpet)");
  table_cmd->add_option("--out", table_out, "output JSON")->required();
  table_cmd->add_option("--grid", table_grid, "nodes per axis");
  table_cmd->add_option("--resolution", table_resolution, "reflectance disk resolution");
  table_cmd->add_option("--threads", table_threads, "worker threads");

  std::string map_scene, map_table, map_out, map_mode = "nearest";
  int         map_camera = 0, map_width = 0, map_height = 0, map_threads = 0;
  auto* map_cmd = app.add_subcommand("friction-map", "per-pixel friction coefficients");
  map_cmd->add_option("--scene", map_scene, "scene JSON")->required();
  map_cmd->add_option("--table", map_table, "friction table JSON")->required();
  map_cmd->add_option("--out", map_out, "output PFM")->required();
  map_cmd->add_option("--mode", map_mode, "nearest | bilinear")
      ->check(CLI::IsMember({"nearest", "bilinear"}));
  map_cmd->add_option("--camera", map_camera, "camera index");
  map_cmd->add_option("--width", map_width, "override image width");
  map_cmd->add_option("--height", map_height, "override image height");
  map_cmd->add_option("--threads", map_threads, "worker threads");

  std::string urdf_obj, urdf_table, urdf_out, urdf_name = "object", urdf_collision;
  std::string urdf_albedo_map, urdf_roughness_map, urdf_mode = "nearest";
  std::vector<double> urdf_albedo = {0.5, 0.5, 0.5};
  double urdf_roughness = 0.5, urdf_mass = 1;
  auto* urdf_cmd = app.add_subcommand("export-urdf", "single-link URDF with friction");
  urdf_cmd->add_option("--obj", urdf_obj, "visual mesh (OBJ)")->required();
  urdf_cmd->add_option("--table", urdf_table, "friction table JSON")->required();
  urdf_cmd->add_option("--out", urdf_out, "output URDF (default stdout)");
  urdf_cmd->add_option("--name", urdf_name, "robot name");
  urdf_cmd->add_option("--mass", urdf_mass, "kilograms");
  urdf_cmd->add_option("--albedo", urdf_albedo, "constant albedo r g b")->expected(3);
  urdf_cmd->add_option("--roughness", urdf_roughness, "constant roughness");
  urdf_cmd->add_option("--albedo-map", urdf_albedo_map, "albedo texture (PFM/PPM)");
  urdf_cmd->add_option("--roughness-map", urdf_roughness_map, "roughness texture (PFM/PPM)");
  urdf_cmd->add_option("--collision", urdf_collision, "collision mesh (default: bounding box)");
  urdf_cmd->add_option("--mode", urdf_mode, "nearest | bilinear")
      ->check(CLI::IsMember({"nearest", "bilinear"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  auto make_config = [](const render_args& a) {
    auto config        = render_config{};
    config.spp         = a.spp;
    config.max_bounces = a.bounces;
    config.seed        = a.seed;
    config.threads     = a.threads;
    return config;
  };

  try {
    if (render_cmd->parsed()) {
      auto scn    = load_scene(render_a.scene);
      auto cam    = detail::pick_camera(scn, render_a.camera, render_a.width, render_a.height);
      auto config = make_config(render_a);
      config.direct_only = direct_only;
      auto out = render(scn, cam, config);
      write_channels(out, render_a.out, config, preview);
    } else if (channels_cmd->parsed()) {
      auto scn    = load_scene(channels_a.scene);
      auto cam    = detail::pick_camera(scn, channels_a.camera, channels_a.width, channels_a.height);
      auto config = make_config(channels_a);
      config.per_light     = true;
      config.envmaps       = !no_envmaps;
      config.envmap_stride = stride;
      config.envmap_theta  = theta;
      config.envmap_phi    = phi;
      config.envmap_spp    = texel_spp;
      if (light_filter >= 0) config.light_filter = light_filter;
      auto out = render(scn, cam, config);
      write_channels(out, channels_a.out, config);
    } else if (views_cmd->parsed()) {
      auto scn    = load_scene(views_scene);
      auto layout = read_layout(views_layout);
      auto poses  = sample_wall_views(layout, views_opts);
      auto ranked = rank_views(scn, poses, views_k > 0 ? views_k : int(poses.size()), views_threads);
      auto result = nlohmann::json::array();
      for (auto& v : ranked) {
        auto& p = v.pose;
        result.push_back({{"pose", {{"position", {p.position.x, p.position.y, p.position.z}},
                                       {"direction", {p.direction.x, p.direction.y, p.direction.z}},
                                       {"up", {p.up.x, p.up.y, p.up.z}}, {"fov", p.vfov},
                                       {"width", p.width}, {"height", p.height}}},
            {"score", v.score}});
      }
      detail::write_json(result, views_out);
    } else if (fit_cmd->parsed()) {
      auto cloud  = read_point_cloud(fit_cloud);
      auto plane  = fit_floor_plane(cloud, fit_threshold, fit_iterations, fit_seed);
      auto grid   = project_topdown(cloud, plane, fit_cell);
      auto layout = polygonize(grid, plane.offset / plane.normal.z, fit_height);
      auto openings = assign_openings(cloud, layout, fit_segment, fit_min_points);
      auto j      = layout_to_json(layout);
      j["plane"]  = {{"normal", {plane.normal.x, plane.normal.y, plane.normal.z}},
          {"offset", plane.offset}};
      auto ops = nlohmann::json::array();
      for (auto& s : openings)
        ops.push_back({{"wall", s.wall}, {"start", s.start}, {"end", s.end},
            {"type", to_string(s.type)}, {"placeholder", s.placeholder}});
      j["openings"] = ops;
      detail::write_json(j, fit_out);
    } else if (eval_cmd->parsed()) {
      auto pred = read_layout(eval_pred);
      auto gt   = read_layout(eval_gt);
      auto m    = eval_layout(pred, gt, eval_scale);
      detail::write_json({{"corner_precision", m.corner_precision},
                             {"corner_recall", m.corner_recall},
                             {"edge_precision", m.edge_precision}, {"edge_recall", m.edge_recall},
                             {"iou", m.iou}},
          eval_out);
    } else if (table_cmd->parsed()) {
      auto anchors = table_anchors.empty()
                         ? default_friction_anchors()
                         : friction_anchors_from_json(detail::read_json(table_anchors), table_anchors);
      if (table_grid < 1) throw error("grid must have at least 1 node per axis");
      auto axis  = linspace(0, 1, table_grid);
      auto table = build_friction_table(anchors, axis, axis, table_resolution, table_threads);
      detail::write_json(friction_table_to_json(table), table_out);
    } else if (map_cmd->parsed()) {
      auto scn   = load_scene(map_scene);
      auto cam   = detail::pick_camera(scn, map_camera, map_width, map_height);
      auto table = friction_table_from_json(detail::read_json(map_table), map_table);
      auto map   = friction_map(scn, cam, table, detail::parse_mode(map_mode), map_threads);
      auto path  = std::filesystem::path(map_out);
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      write_pfm(map, path);
    } else if (urdf_cmd->parsed()) {
      auto object        = urdf_object{};
      object.name        = urdf_name;
      object.mesh        = load_obj(urdf_obj);
      object.mass        = urdf_mass;
      object.visual_path = urdf_obj;
      object.collision_path     = urdf_collision;
      object.material.id        = urdf_name;
      object.material.albedo    = {urdf_albedo[0], urdf_albedo[1], urdf_albedo[2]};
      object.material.roughness = urdf_roughness;
      if (!urdf_albedo_map.empty()) object.material.albedo_map = read_image(urdf_albedo_map);
      if (!urdf_roughness_map.empty()) object.material.roughness_map = read_image(urdf_roughness_map);
      auto table = friction_table_from_json(detail::read_json(urdf_table), urdf_table);
      auto xml   = export_urdf(object, table, detail::parse_mode(urdf_mode));
      if (urdf_out.empty()) {
        std::cout << xml;
      } else {
        write_binary(urdf_out, xml);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_ok;
}

}  // namespace roomgt::cli
