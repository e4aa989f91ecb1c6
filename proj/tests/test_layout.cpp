#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "roomgt/layout.hpp"

using namespace roomgt;

namespace {

layout_polygon rectangle(double w, double h, double x0 = 0, double y0 = 0) {
  return {{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}}, 0, 3};
}

// Plane z = height with Gaussian noise plus uniform outliers in a 5 m cube.
point_cloud noisy_floor(uint64_t seed, double height, double sigma, double outlier_fraction,
    int count = 2000) {
  std::mt19937_64 gen(seed);
  auto u     = std::uniform_real_distribution<double>(0, 5);
  auto noise = std::normal_distribution<double>(0, sigma);
  auto cloud = point_cloud{};
  int  outliers = int(count * outlier_fraction);
  for (int i = 0; i < count - outliers; i++) cloud.points.push_back({u(gen), u(gen), height + noise(gen)});
  for (int i = 0; i < outliers; i++) cloud.points.push_back({u(gen), u(gen), u(gen)});
  return cloud;
}

double angle_to_up(vec3 n) { return degrees(std::acos(std::clamp(n.z, -1.0, 1.0))); }

}  // namespace

TEST(PointCloud, ParsesLabelsAndReportsLines) {
  auto in    = std::istringstream("# header\n0 0 0 1\n1 0 0 2\n\n0 1 0 0\n");
  auto cloud = parse_point_cloud(in);
  ASSERT_EQ(cloud.points.size(), 3u);
  EXPECT_EQ(cloud.labels, (std::vector<int>{1, 2, 0}));
  auto bad = std::istringstream("0 0 0\n1 x 0\n");
  try {
    parse_point_cloud(bad, "room.xyz");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_NE(e.where.find("room.xyz:2"), std::string::npos) << e.where;
  }
  auto nan = std::istringstream("0 0 nan\n");
  EXPECT_THROW(parse_point_cloud(nan), parse_error);
}

TEST(FloorPlane, ExactPlane) {
  std::mt19937_64 gen(1);
  auto u     = std::uniform_real_distribution<double>(-3, 3);
  auto cloud = point_cloud{};
  for (int i = 0; i < 1000; i++) cloud.points.push_back({u(gen), u(gen), 0});
  auto plane = fit_floor_plane(cloud);
  EXPECT_NEAR(plane.normal.x, 0, 1e-9);
  EXPECT_NEAR(plane.normal.y, 0, 1e-9);
  EXPECT_NEAR(plane.normal.z, 1, 1e-9);
  EXPECT_NEAR(plane.offset, 0, 1e-9);
}

TEST(FloorPlane, NoisyPlaneWithOutliers) {
  auto cloud = noisy_floor(4, 0.1, 0.005, 0.3);
  auto plane = fit_floor_plane(cloud, 0.02, 1000, 0);
  EXPECT_LT(angle_to_up(plane.normal), 1.0);
  EXPECT_NEAR(plane.offset / plane.normal.z, 0.1, 0.01);
  for (auto& p : cloud.points) {
    if (std::abs(plane.distance(p)) > 0.02) continue;
    EXPECT_LE(std::abs(plane.distance(p)), 0.02);
  }
}

TEST(FloorPlane, DeterministicForSeed) {
  auto cloud = noisy_floor(5, -0.3, 0.01, 0.4);
  auto a     = fit_floor_plane(cloud, 0.02, 200, 17);
  auto b     = fit_floor_plane(cloud, 0.02, 200, 17);
  EXPECT_EQ(a.normal, b.normal);
  EXPECT_EQ(a.offset, b.offset);
}

TEST(FloorPlane, VerticalWallIsRejected) {
  std::mt19937_64 gen(2);
  auto u     = std::uniform_real_distribution<double>(0, 3);
  auto cloud = point_cloud{};
  for (int i = 0; i < 500; i++) cloud.points.push_back({1.5, u(gen), u(gen)});
  EXPECT_THROW(fit_floor_plane(cloud), error);
}

TEST(FloorPlane, TooFewPoints) {
  auto cloud = point_cloud{{{0, 0, 0}, {1, 0, 0}}, {}};
  EXPECT_THROW(fit_floor_plane(cloud), error);
}

TEST(Topdown, SinglePoint) {
  auto cloud = point_cloud{{{0.3, 0.7, 0}}, {}};
  auto grid  = project_topdown(cloud, {}, 0.5);
  EXPECT_EQ(grid.width, 1);
  EXPECT_EQ(grid.height, 1);
  EXPECT_TRUE(grid.occupied(0, 0));
}

TEST(Topdown, TwoPointsOneMeterApart) {
  auto cloud = point_cloud{{{0, 0, 0}, {1, 0, 0}}, {}};
  auto grid  = project_topdown(cloud, {}, 0.5);
  EXPECT_EQ(grid.height, 1);
  int first = -1, last = -1;
  for (int x = 0; x < grid.width; x++)
    if (grid.occupied(x, 0)) {
      if (first < 0) first = x;
      last = x;
    }
  EXPECT_EQ(last - first, 2);
  EXPECT_FALSE(grid.occupied(1, 0));
}

TEST(Topdown, DimensionsCoverTheExtent) {
  // Cells are centered on the extreme points, so the extent plus one cell is
  // covered: ceil(extent / cell) cells span the interior, plus the half
  // cells at each end.
  std::mt19937_64 gen(3);
  auto u = std::uniform_real_distribution<double>(0, 1);
  for (double cell : {0.05, 0.1, 0.3}) {
    auto cloud = point_cloud{};
    for (int i = 0; i < 200; i++) cloud.points.push_back({2.3 * u(gen), 1.1 * u(gen), 0});
    double ex = 0, ey = 0;
    auto lo = vec2{infinity, infinity}, hi = vec2{-infinity, -infinity};
    for (auto& p : cloud.points) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    ex = hi.x - lo.x;
    ey = hi.y - lo.y;
    auto grid = project_topdown(cloud, {}, cell);
    EXPECT_EQ(grid.width, int(std::ceil(ex / cell + 1 - 1e-9)));
    EXPECT_EQ(grid.height, int(std::ceil(ey / cell + 1 - 1e-9)));
    EXPECT_GE(grid.width * cell, ex);
    EXPECT_LE(grid.width * cell, ex + 2 * cell);
  }
}

TEST(Polygonize, FilledRectangle) {
  auto cloud = point_cloud{};
  for (int i = 0; i <= 60; i++)
    for (int j = 0; j <= 40; j++) cloud.points.push_back({i * 0.05, j * 0.05, 0});
  auto grid   = project_topdown(cloud, {}, 0.05);
  auto layout = polygonize(grid);
  ASSERT_EQ(layout.vertices.size(), 4u);
  EXPECT_GT(signed_area(layout.vertices), 0);
  EXPECT_NEAR(signed_area(layout.vertices), 3.05 * 2.05, 1e-9);
}

TEST(Polygonize, LShapeKeepsSixCorners) {
  auto cloud = point_cloud{};
  for (int i = 0; i < 80; i++)
    for (int j = 0; j < 80; j++)
      if (i < 40 || j < 40) cloud.points.push_back({i * 0.05, j * 0.05, 0});
  // A small detached blob is ignored.
  cloud.points.push_back({6, 6, 0});
  auto layout = polygonize(project_topdown(cloud, {}, 0.05));
  EXPECT_EQ(layout.vertices.size(), 6u);
  EXPECT_TRUE(point_in_polygon(layout.vertices, {1, 1}));
  EXPECT_FALSE(point_in_polygon(layout.vertices, {3.5, 3.5}));
}

TEST(Openings, NoLabelsNoSegments) {
  auto cloud = point_cloud{{{1, 0, 1}, {2, 0, 1}}, {}};
  EXPECT_TRUE(assign_openings(cloud, rectangle(4, 3)).empty());
  cloud.labels = {0, 0};
  EXPECT_TRUE(assign_openings(cloud, rectangle(4, 3)).empty());
}

TEST(Openings, MergesAdjacentBins) {
  // 100 window points spanning x in [1.5, 2.5) on the 4 m south wall.
  auto cloud = point_cloud{};
  for (int i = 0; i < 100; i++) {
    cloud.points.push_back({1.5 + i * 0.01, 0.02, 1.2 + 0.005 * (i % 7)});
    cloud.labels.push_back(label_window);
  }
  auto segs = assign_openings(cloud, rectangle(4, 3), 0.5, 10);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].wall, 0);
  EXPECT_DOUBLE_EQ(segs[0].start, 1.5);
  EXPECT_DOUBLE_EQ(segs[0].end, 2.5);
  EXPECT_EQ(segs[0].type, opening_type::window);
  EXPECT_EQ(segs[0].placeholder, 0);
}

TEST(Openings, SeparateRunsAndTypes) {
  auto cloud = point_cloud{};
  auto add   = [&](double x0, double x1, double y, int label) {
    for (int i = 0; i < 40; i++) {
      cloud.points.push_back({x0 + (x1 - x0) * i / 40.0, y, 1});
      cloud.labels.push_back(label);
    }
  };
  add(0.05, 0.5, 0.01, label_window);
  add(2.0, 2.5, 0.01, label_window);
  add(4.0, 4.0, 0.0, label_window);  // on the corner: tied between walls 0 and 1
  add(3.99, 3.99, 1.5, label_door);   // east wall, x = 4
  auto segs = assign_openings(cloud, rectangle(4, 3), 0.5, 20);
  ASSERT_EQ(segs.size(), 4u);
  EXPECT_EQ(segs[0].wall, 0);
  EXPECT_DOUBLE_EQ(segs[0].start, 0.0);
  EXPECT_EQ(segs[1].wall, 0);
  EXPECT_DOUBLE_EQ(segs[1].start, 2.0);
  EXPECT_EQ(segs[2].wall, 0);
  EXPECT_DOUBLE_EQ(segs[2].start, 3.5);
  EXPECT_EQ(segs[3].wall, 1);
  EXPECT_EQ(segs[3].type, opening_type::door);
  for (int i = 0; i < 4; i++) EXPECT_EQ(segs[i].placeholder, i);
}

TEST(Openings, TieGoesToLowerWall) {
  // (2, 2) in a 4 x 4 square is 2 m from every wall.
  auto square = rectangle(4, 4);
  EXPECT_EQ(nearest_wall(square.vertices, {2, 2}), 0);
  EXPECT_EQ(nearest_wall(square.vertices, {4, 1.5}), 1);
  auto cloud = point_cloud{};
  for (int i = 0; i < 30; i++) {
    cloud.points.push_back({2, 2, 1});
    cloud.labels.push_back(label_door);
  }
  auto segs = assign_openings(cloud, square, 0.5, 20);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].wall, 0);
}

TEST(Placement, FloatingBoxDrops) {
  auto obj = placed_object{"chair", {1, 1, 0.55}, {0.2, 0.2, 0.5}, 0};
  auto out = resolve_placement({obj}, rectangle(4, 3));
  EXPECT_NEAR(out.objects[0].center.z, 0.5, 1e-12);
  EXPECT_EQ(out.objects[0].center.x, 1.0);
}

TEST(Placement, SunkBoxRises) {
  auto obj = placed_object{"table", {1, 1, 0.3}, {0.5, 0.4, 0.4}, 0.2};
  auto out = resolve_placement({obj}, rectangle(4, 3, 0, 0));
  EXPECT_NEAR(out.objects[0].center.z, 0.4, 1e-12);
}

TEST(Placement, WallPenetrationPushedInward) {
  // East wall at x = 4; the box reaches x = 4.1.
  auto obj = placed_object{"cabinet", {3.8, 1.5, 0.5}, {0.3, 0.4, 0.5}, 0};
  auto out = resolve_placement({obj}, rectangle(4, 3));
  EXPECT_NEAR(out.objects[0].center.x, 3.7, 1e-12);
  EXPECT_NEAR(out.objects[0].center.y, 1.5, 1e-12);
}

TEST(Placement, CornerPenetrationPushedOutOfBothWalls) {
  auto obj = placed_object{"box", {0.1, 0.1, 0.5}, {0.3, 0.3, 0.5}, 0};
  auto out = resolve_placement({obj}, rectangle(4, 3));
  EXPECT_NEAR(out.objects[0].center.x, 0.3, 1e-9);
  EXPECT_NEAR(out.objects[0].center.y, 0.3, 1e-9);
}

TEST(Placement, Idempotent) {
  std::mt19937_64 gen(6);
  auto u    = std::uniform_real_distribution<double>(-0.5, 4.5);
  auto objs = std::vector<placed_object>{};
  for (int i = 0; i < 20; i++)
    objs.push_back({"o" + std::to_string(i), {u(gen), u(gen) * 0.7, u(gen) * 0.3},
        {0.2 + 0.05 * (i % 4), 0.3, 0.4}, u(gen)});
  auto room   = rectangle(4, 3);
  auto once   = resolve_placement(objs, room);
  auto twice  = resolve_placement(once.objects, room);
  for (size_t i = 0; i < objs.size(); i++) {
    EXPECT_EQ(once.objects[i].center, twice.objects[i].center) << i;
    for (auto c : once.objects[i].footprint()) {
      EXPECT_GE(c.x, -1e-9);
      EXPECT_LE(c.x, 4 + 1e-9);
      EXPECT_GE(c.y, -1e-9);
      EXPECT_LE(c.y, 3 + 1e-9);
    }
  }
  EXPECT_EQ(once.overlaps, twice.overlaps);
}

TEST(Placement, ValidBoxUnchanged) {
  auto obj = placed_object{"bed", {2, 1.5, 0.25}, {1, 0.7, 0.25}, 0.1};
  auto out = resolve_placement({obj}, rectangle(4, 3));
  EXPECT_EQ(out.objects[0].center, obj.center);
  EXPECT_TRUE(out.overlaps.empty());
}

TEST(Placement, OverlapsReportedNotResolved) {
  auto a   = placed_object{"a", {1, 1, 0.5}, {0.5, 0.5, 0.5}, 0};
  auto b   = placed_object{"b", {1.5, 1, 0.5}, {0.5, 0.5, 0.5}, 0.3};
  auto c   = placed_object{"c", {3, 2, 0.5}, {0.2, 0.2, 0.5}, 0};
  auto out = resolve_placement({a, b, c}, rectangle(4, 3));
  ASSERT_EQ(out.overlaps.size(), 1u);
  EXPECT_EQ(out.overlaps[0], (std::pair<int, int>{0, 1}));
  EXPECT_EQ(out.objects[0].center.x, 1.0);
  EXPECT_EQ(out.objects[1].center.x, 1.5);
}

TEST(Placement, TooLargeNamesTheObject) {
  auto wide = placed_object{"sofa", {2, 1.5, 0.5}, {2.5, 0.5, 0.5}, 0};
  try {
    resolve_placement({wide}, rectangle(4, 3));
    FAIL();
  } catch (const error& e) {
    EXPECT_NE(std::string(e.what()).find("sofa"), std::string::npos);
  }
  auto tall = placed_object{"lamp", {2, 1.5, 0.5}, {0.2, 0.2, 1.6}, 0};
  EXPECT_THROW(resolve_placement({tall}, rectangle(4, 3)), error);
  auto flat = placed_object{"rug", {2, 1.5, 0}, {0.2, 0.2, 0}, 0};
  EXPECT_THROW(resolve_placement({flat}, rectangle(4, 3)), error);
}

TEST(LayoutMetrics, IdenticalLayouts) {
  auto l = layout_polygon{{{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}}};
  auto m = eval_layout(l, l, 50);
  EXPECT_EQ(m.corner_precision, 1.0);
  EXPECT_EQ(m.corner_recall, 1.0);
  EXPECT_EQ(m.edge_precision, 1.0);
  EXPECT_EQ(m.edge_recall, 1.0);
  EXPECT_EQ(m.iou, 1.0);
}

TEST(LayoutMetrics, TenPixelBoundary) {
  // 100 px per meter: 0.100 m is 10.0 px, 0.101 m is 10.1 px.
  auto gt      = rectangle(4, 3);
  auto at_ten  = gt;
  at_ten.vertices[2].x += 0.1;
  auto m = eval_layout(at_ten, gt, 100);
  EXPECT_EQ(m.corner_precision, 1.0);
  EXPECT_EQ(m.corner_recall, 1.0);
  EXPECT_EQ(m.edge_precision, 1.0);

  auto past = gt;
  past.vertices[2].x += 0.101;
  m = eval_layout(past, gt, 100);
  EXPECT_EQ(m.corner_precision, 0.75);
  EXPECT_EQ(m.corner_recall, 0.75);
  EXPECT_EQ(m.edge_precision, 0.5);
  EXPECT_EQ(m.edge_recall, 0.5);

  auto diagonal = gt;
  diagonal.vertices[0] = {0.06, 0.08};  // exactly 10 px away at 100 px/m
  m = eval_layout(diagonal, gt, 100);
  EXPECT_EQ(m.corner_precision, 1.0);
}

TEST(LayoutMetrics, DisjointIouIsZero) {
  auto m = eval_layout(rectangle(1, 1), rectangle(1, 1, 5, 5), 20);
  EXPECT_EQ(m.iou, 0.0);
  EXPECT_EQ(m.corner_precision, 0.0);
  EXPECT_EQ(m.edge_recall, 0.0);
}

TEST(LayoutMetrics, EmptyPrediction) {
  auto m = eval_layout(layout_polygon{}, rectangle(2, 2), 10);
  EXPECT_EQ(m.corner_precision, 0.0);
  EXPECT_EQ(m.corner_recall, 0.0);
  EXPECT_EQ(m.iou, 0.0);
}

TEST(LayoutMetrics, SwapExchangesPrecisionAndRecall) {
  auto gt   = layout_polygon{{{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}}};
  auto pred = layout_polygon{{{0.02, 0}, {4, 0.05}, {4, 4}, {0, 4}}};
  auto a    = eval_layout(pred, gt, 100);
  auto b    = eval_layout(gt, pred, 100);
  EXPECT_EQ(a.corner_precision, b.corner_recall);
  EXPECT_EQ(a.corner_recall, b.corner_precision);
  EXPECT_EQ(a.edge_precision, b.edge_recall);
  EXPECT_EQ(a.edge_recall, b.edge_precision);
  EXPECT_EQ(a.iou, b.iou);
  for (double v : {a.corner_precision, a.corner_recall, a.edge_precision, a.edge_recall, a.iou}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_NEAR(a.iou, 12.0 / 16.0, 0.01);
}

TEST(LayoutMetrics, GreedyMatchingIsOneToOne) {
  auto m = match_corners({{0, 0}, {0.01, 0}}, {{0.005, 0}}, 100);
  EXPECT_EQ(std::count(m.begin(), m.end(), 0), 1);
  EXPECT_EQ(m[0], 0);  // equal distance: lower predicted index wins
}

TEST(LayoutJson, RoundTrip) {
  auto l    = layout_polygon{{{0, 0}, {1.5, 0}, {1.5, 2.25}}, 0.125, 2.75};
  auto back = layout_from_json(layout_to_json(l));
  EXPECT_EQ(back.vertices, l.vertices);
  EXPECT_EQ(back.floor_z, l.floor_z);
  EXPECT_EQ(back.height, l.height);
  EXPECT_THROW(layout_from_json(nlohmann::json{{"vertices", {{1, 2, 3}}}}), parse_error);
}
