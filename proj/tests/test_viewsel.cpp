#include <gtest/gtest.h>

#include <cmath>

#include "roomgt/viewsel.hpp"
#include "scenes.hpp"

using namespace roomgt;

namespace {

image constant_normals(int w, int h, vec3 n = {0, 0, 1}) {
  auto img = image(w, h, 3);
  for (int y = 0; y < h; y++)
    for (int x = 0; x < w; x++) img.set_rgb(x, y, n);
  return img;
}

view_candidate with_score(double score, double tag) {
  auto v   = view_candidate{};
  v.score  = score;
  v.pose.vfov = tag;
  return v;
}

}  // namespace

TEST(NormalGradient, ConstantMapIsZero) {
  EXPECT_EQ(normal_gradient_sum(constant_normals(7, 5, normalize(vec3{1, 2, 3}))), 0.0);
}

TEST(NormalGradient, VerticalSeam) {
  // x-normal flips from +1 to -1 between columns 3 and 4 over height 6.
  int  h   = 6;
  auto img = image(8, h, 3);
  for (int y = 0; y < h; y++)
    for (int x = 0; x < 8; x++) img.set_rgb(x, y, {x < 4 ? 1.0 : -1.0, 0, 0});
  EXPECT_DOUBLE_EQ(normal_gradient_sum(img), 2.0 * h);
}

TEST(NormalGradient, HandCountedFourByFour) {
  // x channel pattern; forward differences counted by hand: 3 along x, 8
  // along y. A lone 0.5 in z at (1, 1) adds 0.5 four times.
  const double xs[4][4] = {{0, 1, 1, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}, {0, 0, 0, 0}};
  auto img = image(4, 4, 3);
  for (int y = 0; y < 4; y++)
    for (int x = 0; x < 4; x++) img.set_rgb(x, y, {xs[y][x], 0.25, 0});
  img.at(1, 1, 2) = 0.5f;
  EXPECT_DOUBLE_EQ(normal_gradient_sum(img), 13.0);
}

TEST(ScoreView, UniformDepthAndConstantNormals) {
  auto depth = image(10, 10, 1, float(std::exp(1.0) - 1));
  double s   = score_view(depth, constant_normals(10, 10));
  // Depth is stored as float, so ln(d + 1) is 1 only to float precision.
  EXPECT_NEAR(s, 30.0, 1e-5);
  EXPECT_NEAR(s, 0.3 * 100 * std::log(double(float(std::exp(1.0) - 1)) + 1), 1e-9);
}

TEST(ScoreView, ZeroDepthConstantNormalsIsZero) {
  EXPECT_EQ(score_view(image(9, 4, 1), constant_normals(9, 4)), 0.0);
}

TEST(ScoreView, MonotoneInDepth) {
  auto depth = image(6, 6, 1);
  for (int i = 0; i < 36; i++) depth.data[i] = float(i % 5) * 0.7f;
  auto   normals = constant_normals(6, 6);
  double base    = score_view(depth, normals);
  for (double s : {1.1, 2.0, 5.0}) {
    auto scaled = depth;
    for (auto& d : scaled.data) d = float(d * s);
    EXPECT_GT(score_view(scaled, normals), base);
  }
}

TEST(ScoreView, EmptyMarginLeavesScoreUnchanged) {
  auto depth = image(5, 4, 1), normals = constant_normals(5, 4, {0, 1, 0});
  for (int i = 0; i < 20; i++) depth.data[i] = 0.5f + 0.1f * float(i);
  auto padded_depth = image(9, 8, 1), padded_normals = constant_normals(9, 8, {0, 1, 0});
  for (int y = 0; y < 4; y++)
    for (int x = 0; x < 5; x++) padded_depth.at(x + 2, y + 2) = depth.at(x, y);
  EXPECT_NEAR(score_view(padded_depth, padded_normals), score_view(depth, normals), 1e-12);
}

TEST(WallViews, UnitSquare) {
  auto layout     = layout_polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  auto opts       = wall_view_options{};
  opts.inset      = 0.1;
  auto views      = sample_wall_views(layout, opts);
  ASSERT_EQ(views.size(), 8u);
  for (auto& v : views) {
    auto to_center = vec3{0.5, 0.5, 1.5} - v.position;
    EXPECT_GT(dot(v.direction, to_center), 0);
    EXPECT_NEAR(length(cross(v.direction, normalize(to_center))), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(v.position.z, 1.5);
    EXPECT_EQ(v.width, 160);
    EXPECT_EQ(v.height, 120);
  }
  // Along the first wall: 0.25 and 0.75, inset to y = 0.1.
  EXPECT_NEAR(views[0].position.x, 0.25, 1e-12);
  EXPECT_NEAR(views[0].position.y, 0.1, 1e-12);
  EXPECT_NEAR(views[1].position.x, 0.75, 1e-12);
}

TEST(WallViews, ClockwiseInputGivesSamePositions) {
  auto ccw = sample_wall_views({{{0, 0}, {2, 0}, {2, 1}, {0, 1}}});
  auto cw  = sample_wall_views({{{0, 1}, {2, 1}, {2, 0}, {0, 0}}});
  EXPECT_EQ(ccw.size(), cw.size());
  EXPECT_EQ(ccw.size(), 12u);
}

TEST(WallViews, LShapeStaysInside) {
  auto poly   = std::vector<vec2>{{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}};
  auto layout = layout_polygon{poly, 0.2, 3};
  auto views  = sample_wall_views(layout);
  EXPECT_EQ(views.size(), 32u);
  for (auto& v : views) {
    EXPECT_TRUE(point_in_polygon(poly, {v.position.x, v.position.y}));
    EXPECT_DOUBLE_EQ(v.position.z, 1.7);
  }
}

TEST(WallViews, DegeneratePolygonIsAnError) {
  EXPECT_THROW(sample_wall_views({{{0, 0}, {1, 0}, {2, 0}}}), error);
  EXPECT_THROW(sample_wall_views({{{0, 0}, {1, 0}}}), error);
  auto opts    = wall_view_options{};
  opts.spacing = 0;
  EXPECT_THROW(sample_wall_views({{{0, 0}, {1, 0}, {1, 1}}}, opts), error);
}

TEST(RankViews, SortedDescendingAndStable) {
  auto c = std::vector<view_candidate>{with_score(1, 10), with_score(3, 11), with_score(2, 12),
      with_score(3, 13), with_score(0.5, 14)};
  auto all = rank_views(c, 5);
  ASSERT_EQ(all.size(), 5u);
  auto tags = std::vector<double>{};
  for (auto& v : all) tags.push_back(v.pose.vfov);
  EXPECT_EQ(tags, (std::vector<double>{11, 13, 12, 10, 14}));
  auto top = rank_views(c, 2);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].pose.vfov, 11);
  EXPECT_EQ(top[1].pose.vfov, 13);
  EXPECT_EQ(rank_views(c, 100).size(), 5u);
}

TEST(RankViews, Errors) {
  EXPECT_THROW(rank_views(std::vector<view_candidate>{}, 1), error);
  EXPECT_THROW(rank_views(std::vector<view_candidate>{with_score(1, 1)}, 0), error);
}

TEST(RankViews, FurnitureBeatsBareWall) {
  auto room      = scenes::make_furnished_room();
  auto furniture = look_at({0.7, 2, 1.5}, {4, 2, 1.0}, world_up, 60, 160, 120);
  auto bare      = look_at({3.0, 2, 1.5}, {0, 2, 1.0}, world_up, 60, 160, 120);
  auto a         = evaluate_view(room.scn, furniture);
  auto b         = evaluate_view(room.scn, bare);
  EXPECT_GT(a.score, b.score);
  auto ranked = rank_views(room.scn, {bare, furniture}, 1, 2);
  ASSERT_EQ(ranked.size(), 1u);
  EXPECT_EQ(ranked[0].pose.position, furniture.position);
}

TEST(EvaluateView, DepthIsAlongViewAxis) {
  auto room = scenes::make_furnished_room();
  auto cam  = look_at({2, 0.5, 1.5}, {2, 4, 1.5}, world_up, 60, 33, 21);
  auto v    = evaluate_view(room.scn, cam);
  // The north wall is 3.5 m ahead; planar depth is the same for every pixel
  // that sees it.
  EXPECT_NEAR(v.depth.at(16, 10), 3.5, 1e-5);
  EXPECT_NEAR(v.depth.at(14, 8), 3.5, 1e-5);
  auto n = v.normal.rgb_at(16, 10);
  EXPECT_NEAR(n.z, 1.0, 1e-6);
}
