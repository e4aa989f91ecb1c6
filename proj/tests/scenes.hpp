#pragma once

// Small scenes built in code, shared by the unit tests and the acceptance
// suite.

#include "roomgt/integrator.hpp"
#include "roomgt/polygon.hpp"

namespace scenes {

using namespace roomgt;

// 4 m x 4 m room, 3 m tall, walls facing inward. A cluster of furniture
// stands against the east wall (x = 4); the west wall is bare.
struct furnished_room {
  scene          scn;
  layout_polygon layout;
};

inline furnished_room make_furnished_room() {
  auto desc = scene_description{};
  desc.materials.push_back({"wall", {0.7, 0.7, 0.7}, 0.8});
  desc.materials.push_back({"furniture", {0.4, 0.3, 0.2}, 0.5});
  desc.meshes.push_back(make_quad({0, 0, 0}, {4, 0, 0}, {0, 4, 0}));   // floor
  desc.meshes.push_back(make_quad({0, 0, 3}, {0, 4, 0}, {4, 0, 0}));   // ceiling
  desc.meshes.push_back(make_quad({0, 0, 0}, {0, 0, 3}, {4, 0, 0}));   // south, y = 0
  desc.meshes.push_back(make_quad({0, 4, 0}, {4, 0, 0}, {0, 0, 3}));   // north, y = 4
  desc.meshes.push_back(make_quad({0, 0, 0}, {0, 4, 0}, {0, 0, 3}));   // west, x = 0
  desc.meshes.push_back(make_quad({4, 0, 0}, {0, 0, 3}, {0, 4, 0}));   // east, x = 4
  desc.meshes.push_back(make_box({3.75, 1.2, 0.9}, {0.2, 0.5, 0.9}, 0, 1));        // wardrobe
  desc.meshes.push_back(make_box({3.5, 2.3, 0.4}, {0.3, 0.4, 0.4}, 0.35, 1));      // dresser
  desc.meshes.push_back(make_box({3.7, 3.2, 0.25}, {0.25, 0.3, 0.25}, -0.2, 1));   // stool
  desc.meshes.push_back(make_box({3.8, 2.3, 1.6}, {0.15, 0.6, 0.05}, 0, 1));       // shelf
  for (int i = 0; i < int(desc.meshes.size()); i++) desc.meshes[i].instance_id = i;
  auto room = furnished_room{scene(desc), {}};
  room.layout.vertices = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  room.layout.floor_z  = 0;
  room.layout.height   = 3;
  return room;
}

// Diffuse-ish floor under one box lamp.
inline scene_description lamp_over_floor() {
  auto desc = scene_description{};
  desc.materials.push_back({"floor", {0.5, 0.5, 0.5}, 0.5});
  desc.meshes.push_back(make_quad({-2, -2, 0}, {4, 0, 0}, {0, 4, 0}));
  desc.lights.push_back(make_lamp_light({0, 0, 1.5}, {0.2, 0.2, 0.05}, 6000, 3));
  return desc;
}

}  // namespace scenes
