#include <cstdlib>
#include <regex>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "roadgen/error.hpp"
#include "roadgen/grid.hpp"
#include "roadgen/sumo.hpp"
#include "support/tempdir.hpp"

using namespace roadgen;
using roadgen::testing::fixture;
using roadgen::testing::slurp;
using roadgen::testing::TempDir;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(SumoPlain, EmptyGraph) {
  const auto f = sumo::export_sumo_plain(NetworkGraph{});
  EXPECT_NE(f.nod_xml.find("<nodes/>"), std::string::npos);
  EXPECT_NE(f.edg_xml.find("<edges/>"), std::string::npos);
}

TEST(SumoPlain, TwoNodesOneLink) {
  auto g = generate_grid({1, 2});
  g.links.pop_back();
  const auto f = sumo::export_sumo_plain(g);
  EXPECT_NE(f.nod_xml.find(R"(<node id="0" x="-0.500000" y="0.000000"/>)"), std::string::npos) << f.nod_xml;
  EXPECT_NE(f.nod_xml.find(R"(<node id="1" x="0.500000" y="0.000000"/>)"), std::string::npos);
  EXPECT_NE(f.edg_xml.find(R"(<edge id="0" from="0" to="1" numLanes="2"/>)"), std::string::npos) << f.edg_xml;
  EXPECT_EQ(count(f.edg_xml, "<edge "), 1u);
}

TEST(SumoPlain, GridCounts) {
  const auto f = sumo::export_sumo_plain(generate_grid({3, 3}));
  EXPECT_EQ(count(f.nod_xml, "<node "), 9u);
  EXPECT_EQ(count(f.edg_xml, "<edge "), 24u);
}

TEST(SumoPlain, EveryEdgeEndpointIsANode) {
  const auto f = sumo::export_sumo_plain(generate_grid({3, 4}));
  std::set<std::string> ids;
  const std::regex node_re(R"re(<node id="(\d+)")re");
  for (std::sregex_iterator it(f.nod_xml.begin(), f.nod_xml.end(), node_re), end; it != end; ++it) {
    ids.insert((*it)[1]);
  }
  const std::regex edge_re(R"re(from="(\d+)" to="(\d+)")re");
  std::size_t edges = 0;
  for (std::sregex_iterator it(f.edg_xml.begin(), f.edg_xml.end(), edge_re), end; it != end; ++it, ++edges) {
    EXPECT_TRUE(ids.contains((*it)[1]));
    EXPECT_TRUE(ids.contains((*it)[2]));
  }
  EXPECT_EQ(edges, 34u);
}

TEST(SumoPlain, GeoModeWritesLonLat) {
  const auto f = sumo::export_sumo_plain(generate_grid({1, 1}), sumo::CoordinateMode::Geo);
  EXPECT_NE(f.nod_xml.find(R"(x="161.567000" y="39.125000")"), std::string::npos) << f.nod_xml;
}

TEST(SumoPlain, WritesBothFiles) {
  TempDir dir;
  const auto files = sumo::export_sumo_plain(generate_grid({2, 2}));
  const auto paths = sumo::write_sumo_plain(files, dir.path(), "city");
  EXPECT_EQ(paths.nod_xml.filename(), "city.nod.xml");
  EXPECT_EQ(slurp(paths.edg_xml), files.edg_xml);
}

TEST(Netconvert, MissingExecutable) {
  TempDir dir;
  sumo::NetconvertOptions opts;
  opts.executable = dir / "no-such-netconvert";
  try {
    sumo::run_netconvert(sumo::export_sumo_plain(generate_grid({1, 2})), dir.path(), opts);
    FAIL() << "expected ToolMissing";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ToolMissing);
  }
}

TEST(Netconvert, FakeToolProducesNetFile) {
  TempDir dir;
  sumo::NetconvertOptions opts;
  opts.executable = fixture("fake_netconvert_ok.sh");
  const auto net = sumo::run_netconvert(sumo::export_sumo_plain(generate_grid({1, 2})), dir.path(), opts);
  EXPECT_EQ(net.filename(), "network.net.xml");
  EXPECT_NE(slurp(net).find("<net "), std::string::npos);
}

TEST(Netconvert, FailureCarriesDiagnostics) {
  TempDir dir;
  sumo::NetconvertOptions opts;
  opts.executable = fixture("fake_netconvert_fail.sh");
  try {
    sumo::run_netconvert(sumo::export_sumo_plain(generate_grid({1, 2})), dir.path(), opts);
    FAIL() << "expected ToolFailed";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ToolFailed);
    EXPECT_NE(std::string(e.what()).find("unknown node 'n9'"), std::string::npos) << e.what();
  }
}

TEST(Netconvert, RealToolWhenInstalled) {
  if (!sumo::find_executable("netconvert")) GTEST_SKIP() << "netconvert not installed";
  TempDir dir;
  const auto net = sumo::run_netconvert(sumo::export_sumo_plain(generate_grid({2, 2})), dir.path());
  const std::string xml = slurp(net);
  EXPECT_NE(xml.find("<net"), std::string::npos);
  EXPECT_NE(xml.find("</net>"), std::string::npos);
}

TEST(FindExecutable, SearchesPath) {
  EXPECT_TRUE(sumo::find_executable("sh").has_value());
  EXPECT_FALSE(sumo::find_executable("roadgen-definitely-not-a-tool").has_value());
}
