#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "roadgen/connect.hpp"
#include "support/error_kind.hpp"
#include "support/synthetic.hpp"

using namespace roadgen;
using namespace roadgen::extract;
using roadgen::testing::kind_of;
using roadgen::testing::Pt;

namespace {

std::int64_t sse(const BinaryMask& a, const BinaryMask& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

BinaryMask horizontal_road(int w, int h, int y, int x0, int x1) {
  return roadgen::testing::render_strokes(w, h, {{Pt{double(x0), double(y)}, Pt{double(x1), double(y)}}});
}

}  // namespace

TEST(Footprint, ThinLineIsBresenham) {
  const auto fp = segment_footprint(20, 10, {2, 3}, {9, 3}, 0);
  ASSERT_EQ(fp.size(), 8u);
  for (std::size_t k = 0; k < fp.size(); ++k) EXPECT_EQ(fp[k], 3u * 20 + 2 + k);

  const auto diag = segment_footprint(10, 10, {0, 0}, {4, 4}, 0);
  EXPECT_EQ(diag, (std::vector<std::size_t>{0, 11, 22, 33, 44}));
}

TEST(Footprint, ThicknessDilatesAndClips) {
  const auto fp = segment_footprint(10, 10, {0, 0}, {3, 0}, 1);
  // columns 0..4 (clipped at -1), rows 0..1 (clipped at -1)
  EXPECT_EQ(fp.size(), 10u);
  EXPECT_TRUE(std::is_sorted(fp.begin(), fp.end()));
  EXPECT_EQ(std::adjacent_find(fp.begin(), fp.end()), fp.end());
}

TEST(SegmentGain, TenPixelsSixOnRoad) {
  BinaryMask mask(12, 3);
  for (int x = 0; x < 6; ++x) mask.set(x, 1, true);
  const BinaryMask canvas(12, 3);
  EXPECT_EQ(segment_gain(mask, canvas, {0, 1}, {9, 1}, 0), -2);
}

TEST(SegmentGain, AllRoadAndAllBackground) {
  const auto mask = horizontal_road(40, 20, 10, 2, 37);
  const BinaryMask canvas(40, 20);
  const auto area = std::int64_t(segment_footprint(40, 20, {5, 10}, {30, 10}, 1).size());
  EXPECT_EQ(segment_gain(mask, canvas, {5, 10}, {30, 10}, 1), -area);
  EXPECT_EQ(segment_gain(mask, canvas, {5, 2}, {30, 2}, 0), 26);
}

TEST(SegmentGain, MatchesFullImageMse) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> coord(0, 23);
  std::bernoulli_distribution on(0.4);
  for (int k = 0; k < 300; ++k) {
    BinaryMask mask(24, 24), canvas(24, 24);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask.set_index(i, on(rng));
      canvas.set_index(i, on(rng) && on(rng));
    }
    PlanarPoint p{double(coord(rng)), double(coord(rng))};
    PlanarPoint q{double(coord(rng)), double(coord(rng))};
    if (p == q) continue;
    const int t = k % 3;
    BinaryMask after = canvas;
    draw_segment(after, p, q, t);
    EXPECT_EQ(segment_gain(mask, canvas, p, q, t), sse(after, mask) - sse(canvas, mask));
  }
}

TEST(SegmentGain, Errors) {
  const BinaryMask m(10, 10);
  EXPECT_EQ(kind_of([&] { segment_gain(m, m, {0, 0}, {10, 3}, 1); }), ErrorKind::OutOfBounds);
  EXPECT_EQ(kind_of([&] { segment_gain(m, m, {-1, 0}, {3, 3}, 1); }), ErrorKind::OutOfBounds);
  EXPECT_EQ(kind_of([&] { segment_gain(m, BinaryMask(10, 9), {0, 0}, {3, 3}, 1); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { segment_gain(m, m, {2, 2}, {2, 2}, 1); }), ErrorKind::InvalidArgument);
}

TEST(ConnectPoints, JoinedAndUnjoined) {
  const auto mask = horizontal_road(64, 32, 16, 8, 56);
  const auto g = connect_points(mask, {{8, 16}, {56, 16}});
  EXPECT_EQ(g.edges.size(), 1u);
  EXPECT_TRUE(g.has_edge(1, 0));

  const auto none = connect_points(mask, {{8, 4}, {56, 28}});
  EXPECT_TRUE(none.edges.empty());
  EXPECT_TRUE(connect_points(mask, {{8, 16}}).edges.empty());
}

TEST(ConnectPoints, CollinearTripleKeepsShortEdges) {
  const auto mask = horizontal_road(100, 40, 20, 10, 90);
  BinaryMask recon;
  const auto g = connect_points(mask, {{10, 20}, {50, 20}, {90, 20}}, {}, &recon);
  EXPECT_EQ(g.edges, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
  EXPECT_EQ(recon.width(), 100);
  EXPECT_GT(recon.count(), 0u);
  // the long chord finds nothing new against the final reconstruction
  EXPECT_GE(segment_gain(mask, recon, {10, 20}, {90, 20}, 1), 0);
}

TEST(ConnectPoints, MaxPairDistance) {
  const auto mask = horizontal_road(100, 40, 20, 10, 90);
  ConnectParams p;
  p.max_pair_distance = 30.0;
  EXPECT_TRUE(connect_points(mask, {{10, 20}, {50, 20}, {90, 20}}, p).edges.empty());
}

TEST(Adjacency, EdgesAreNormalised) {
  AdjacencyGraph g;
  g.points = {{0, 0}, {1, 0}, {2, 0}};
  g.add_edge(2, 0);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_EQ(g.degrees(), (std::vector<std::size_t>{1, 1, 2}));
}

TEST(Classify, DegreeRule) {
  AdjacencyGraph g;
  g.points = {{0, 0}, {1, 0}, {2, 0}, {1, 1}, {5, 5}};
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  g.add_edge(2, 3);
  const auto c = classify_points(g);
  ASSERT_EQ(c.size(), 5u);
  EXPECT_EQ(c[0].kind, PointKind::Important);     // degree 1
  EXPECT_EQ(c[1].kind, PointKind::Important);     // degree 3
  EXPECT_EQ(c[2].kind, PointKind::NonImportant);  // degree 2
  EXPECT_EQ(c[3].degree, 2u);
  EXPECT_EQ(c[4].kind, PointKind::Important);  // isolated
}

namespace {

AdjacencyGraph chain(std::vector<PlanarPoint> pts) {
  AdjacencyGraph g;
  g.points = std::move(pts);
  for (std::size_t i = 0; i + 1 < g.points.size(); ++i) g.add_edge(i, i + 1);
  return g;
}

}  // namespace

TEST(Prune, CollinearMiddleRemoved) {
  const auto g = chain({{0, 0}, {5, 0}, {10, 0}});
  const auto out = prune_redundant(g, classify_points(g), 2.0);
  EXPECT_EQ(out.points, (std::vector<PlanarPoint>{{0, 0}, {10, 0}}));
  EXPECT_TRUE(out.has_edge(0, 1));
  EXPECT_EQ(out.edges.size(), 1u);
}

TEST(Prune, BentMiddleKept) {
  const auto g = chain({{0, 0}, {5, 3}, {10, 0}});
  const double excess = 2.0 * std::sqrt(34.0) - 10.0;
  EXPECT_NEAR(excess, 1.6619, 1e-4);
  const auto out = prune_redundant(g, classify_points(g), 1.0);
  EXPECT_EQ(out.points, g.points);
  EXPECT_EQ(out.edges, g.edges);
  EXPECT_EQ(prune_redundant(g, classify_points(g), 1.7).points.size(), 2u);
}

TEST(Prune, ChainCollapses) {
  const auto g = chain({{0, 0}, {4, 0}, {7, 0}, {12, 0}});
  const auto out = prune_redundant(g, classify_points(g), 2.0);
  EXPECT_EQ(out.points, (std::vector<PlanarPoint>{{0, 0}, {12, 0}}));
  EXPECT_EQ(out.edges.size(), 1u);
}

TEST(Prune, ImportantPointsAndConnectivitySurvive) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> c(0, 100);
  for (int k = 0; k < 50; ++k) {
    AdjacencyGraph g;
    while (g.points.size() < 12) {
      const PlanarPoint p{std::round(c(rng)), std::round(c(rng))};
      if (std::find(g.points.begin(), g.points.end(), p) == g.points.end()) g.points.push_back(p);
    }
    std::uniform_int_distribution<std::size_t> idx(0, 11);
    for (int e = 0; e < 14; ++e) {
      const auto a = idx(rng), b = idx(rng);
      if (a != b) g.add_edge(a, b);
    }
    const auto classes = classify_points(g);
    const auto out = prune_redundant(g, classes, 3.0);
    for (const auto& pc : classes) {
      if (pc.kind == PointKind::Important) {
        EXPECT_NE(std::find(out.points.begin(), out.points.end(), pc.point), out.points.end());
      }
    }
    // components, counted over Important points, never split
    auto comp = [](const AdjacencyGraph& a) {
      std::vector<std::size_t> parent(a.points.size());
      for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
      auto find = [&parent](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (auto [u, v] : a.edges) parent[find(u)] = find(v);
      std::map<std::pair<double, double>, std::size_t> label;
      for (std::size_t i = 0; i < a.points.size(); ++i) label[{a.points[i].x, a.points[i].y}] = find(i);
      return label;
    };
    const auto before = comp(g);
    const auto after = comp(out);
    for (const auto& x : classes) {
      for (const auto& y : classes) {
        if (x.kind != PointKind::Important || y.kind != PointKind::Important) continue;
        const std::pair kx{x.point.x, x.point.y}, ky{y.point.x, y.point.y};
        if (before.at(kx) == before.at(ky)) EXPECT_EQ(after.at(kx), after.at(ky));
      }
    }
  }
}
