#pragma once

#include "brdf.hpp"
#include "bvh.hpp"
#include "camera.hpp"
#include "channels_io.hpp"
#include "color.hpp"
#include "error.hpp"
#include "friction.hpp"
#include "image.hpp"
#include "integrator.hpp"
#include "layout.hpp"
#include "lights.hpp"
#include "material.hpp"
#include "math.hpp"
#include "mesh.hpp"
#include "parallel.hpp"
#include "polygon.hpp"
#include "rng.hpp"
#include "scene.hpp"
#include "scene_io.hpp"
#include "urdf.hpp"
#include "viewsel.hpp"
