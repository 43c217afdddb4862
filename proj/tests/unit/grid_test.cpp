#include <map>
#include <queue>
#include <set>

#include <gtest/gtest.h>

#include "roadgen/error.hpp"
#include "roadgen/grid.hpp"

using namespace roadgen;

TEST(Grid, SingleNode) {
  const auto g = generate_grid({1, 1});
  ASSERT_EQ(g.nodes.size(), 1u);
  EXPECT_TRUE(g.links.empty());
  EXPECT_EQ(g.nodes[0].planar, (PlanarPoint{0, 0}));
}

TEST(Grid, TwoByTwo) {
  const auto g = generate_grid({2, 2});
  EXPECT_EQ(g.nodes.size(), 4u);
  EXPECT_EQ(g.links.size(), 8u);
}

TEST(Grid, ThreeByThreeLengths) {
  const auto g = generate_grid({3, 3});
  EXPECT_EQ(g.nodes.size(), 9u);
  ASSERT_EQ(g.links.size(), 24u);
  for (const auto& l : g.links) {
    EXPECT_LE(l.length_m, 500.0);
    EXPECT_EQ(l.lanes, 2);
    EXPECT_EQ(l.geometry.size(), 2u);
  }
}

TEST(Grid, CountsForAllSmallSizes) {
  for (std::int64_t n = 1; n <= 8; ++n) {
    for (std::int64_t m = 1; m <= 8; ++m) {
      const auto g = generate_grid({n, m});
      EXPECT_EQ(g.nodes.size(), static_cast<std::size_t>(n * m));
      EXPECT_EQ(g.links.size(), static_cast<std::size_t>(2 * (n * (m - 1) + m * (n - 1))));
    }
  }
}

TEST(Grid, CentredOnAnchorWithRowsAlongY) {
  const auto g = generate_grid({2, 3});
  // row i, col j -> id i*cols + j at (j - 1, i - 0.5)
  EXPECT_EQ(g.nodes[0].planar, (PlanarPoint{-1.0, -0.5}));
  EXPECT_EQ(g.nodes[5].planar, (PlanarPoint{1.0, 0.5}));
  EXPECT_EQ(g.nodes[4].node_id, 4);
}

TEST(Grid, StronglyConnected) {
  const auto g = generate_grid({4, 6});
  std::map<NodeId, std::vector<NodeId>> out;
  for (const auto& l : g.links) out[l.from_node_id].push_back(l.to_node_id);
  std::set<NodeId> seen{0};
  std::queue<NodeId> q;
  q.push(0);
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    for (NodeId w : out[v]) {
      if (seen.insert(w).second) q.push(w);
    }
  }
  EXPECT_EQ(seen.size(), g.nodes.size());
}

TEST(Grid, Deterministic) {
  const auto a = generate_grid({5, 4});
  const auto b = generate_grid({5, 4});
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.links, b.links);
}

TEST(Grid, CustomAnchorAndScale) {
  const GridSpec spec{1, 2, {{116.4, 39.9}, 0.001}};
  const auto g = generate_grid(spec);
  EXPECT_NEAR(g.nodes[0].geo.lon, 116.3995, 1e-12);
  EXPECT_NEAR(g.nodes[1].geo.lon, 116.4005, 1e-12);
}

TEST(Grid, InvalidSpecs) {
  for (const GridSpec& bad : {GridSpec{0, 3}, GridSpec{3, 0}, GridSpec{-1, 2}, GridSpec{101, 100}}) {
    try {
      generate_grid(bad);
      ADD_FAILURE() << bad.rows << "x" << bad.cols << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::SpecInvalid);
    }
  }
}

TEST(Grid, SizeGuardIsConfigurable) {
  GridSpec spec{101, 100};
  spec.max_nodes = 20'000;
  EXPECT_EQ(generate_grid(spec).nodes.size(), 10'100u);
}
