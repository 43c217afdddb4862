#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "roadgen/junctions.hpp"
#include "support/error_kind.hpp"
#include "support/synthetic.hpp"

using namespace roadgen;
using namespace roadgen::extract;
using roadgen::testing::kind_of;
using roadgen::testing::Pt;
using roadgen::testing::render_strokes;

namespace {

double dist(PlanarPoint a, PlanarPoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

BinaryMask plus_mask() {
  return render_strokes(128, 128, {{Pt{64, 10}, Pt{64, 118}}, {Pt{10, 64}, Pt{118, 64}}});
}

}  // namespace

TEST(RefineParams, Validation) {
  EXPECT_NO_THROW(validate(RefineParams{}));
  RefineParams p;
  p.outer_radius = p.inner_radius;
  EXPECT_EQ(kind_of([&] { validate(p); }), ErrorKind::InvalidArgument);
  p = {};
  p.rounds = -1;
  EXPECT_EQ(kind_of([&] { validate(p); }), ErrorKind::InvalidArgument);
  p = {};
  p.profile_reach = 0;
  EXPECT_EQ(kind_of([&] { validate(p); }), ErrorKind::InvalidArgument);
}

TEST(CircleCrossings, FourArmsAtCrossing) {
  const auto c = circle_crossings(plus_mask(), {64, 64}, 12.0);
  ASSERT_EQ(c.size(), 4u);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i - 1].angle, c[i].angle);
  for (const auto& x : c) {
    EXPECT_NEAR(dist(x.point, {64, 64}), 12.0, 1.0);
    EXPECT_GT(x.length, 1.5);
    EXPECT_LT(x.length, 5.0);
  }
  // +x arm first
  EXPECT_NEAR(c[0].point.x, 76.0, 1.0);
  EXPECT_NEAR(c[0].point.y, 64.0, 1.0);
}

TEST(CircleCrossings, NothingOnSolidOrEmpty) {
  BinaryMask full(40, 40);
  for (std::size_t i = 0; i < full.size(); ++i) full.set_index(i, true);
  EXPECT_TRUE(circle_crossings(full, {20, 20}, 8.0).empty());
  EXPECT_TRUE(circle_crossings(BinaryMask(40, 40), {20, 20}, 8.0).empty());
}

TEST(LocateNodes, PullsBoundaryCornersToCentre) {
  const auto mask = plus_mask();
  // corner peaks sit on the stroke boundary, off the centre lines
  const auto out = locate_nodes(mask, {{66, 66}, {62, 62}, {64, 12}});
  ASSERT_EQ(out.size(), 3u);
  EXPECT_LT(dist(out[0], {64, 64}), 1.0);
  EXPECT_LT(dist(out[1], {64, 64}), 1.0);
  EXPECT_NEAR(out[2].x, 64.0, 0.75);
}

TEST(LocateNodes, PointWithoutRoadStays) {
  const auto out = locate_nodes(plus_mask(), {{20, 20}});
  EXPECT_EQ(out[0], (PlanarPoint{20, 20}));
}

TEST(MergeClose, ClustersBecomeCentroids) {
  AdjacencyGraph g;
  g.points = {{0, 0}, {4, 0}, {50, 0}, {2, 3}, {100, 0}};
  g.add_edge(0, 1);  // becomes a self loop
  g.add_edge(1, 2);
  g.add_edge(3, 2);
  g.add_edge(2, 4);
  const auto m = merge_close(g, 5.0);
  ASSERT_EQ(m.points.size(), 3u);
  EXPECT_NEAR(m.points[0].x, 2.0, 1e-12);
  EXPECT_NEAR(m.points[0].y, 1.0, 1e-12);
  EXPECT_EQ(m.points[1], (PlanarPoint{50, 0}));
  EXPECT_EQ(m.edges, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
}

TEST(MergeClose, ZeroRadiusKeepsEverything) {
  AdjacencyGraph g;
  g.points = {{0, 0}, {1, 0}};
  g.add_edge(0, 1);
  const auto m = merge_close(g, 0.0);
  EXPECT_EQ(m.points, g.points);
  EXPECT_EQ(m.edges, g.edges);
}

TEST(FitToArms, MovesJunctionOntoCentreLines) {
  const auto mask = render_strokes(128, 128, {{Pt{20, 40}, Pt{100, 40}}, {Pt{60, 40}, Pt{60, 110}}});
  AdjacencyGraph g;
  g.points = {{20, 40}, {100, 40}, {60, 110}, {63, 43}};
  g.add_edge(0, 3);
  g.add_edge(1, 3);
  g.add_edge(2, 3);
  const auto out = fit_to_arms(mask, g);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_LT(dist(out[3], {60, 40}), 1.0) << out[3].x << "," << out[3].y;
  // leaves keep their place
  EXPECT_EQ(out[0], g.points[0]);
}
