#include <filesystem>
#include <map>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support/tempdir.hpp"

using namespace roadgen::cli;
using roadgen::testing::fixture;
using roadgen::testing::slurp;
using roadgen::testing::spit;
using roadgen::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  TempDir home;
  std::map<std::string, std::string> vars;

  EnvLookup env() {
    vars.try_emplace("HOME", home.path().string());
    return [this](const char* name) -> const char* {
      const auto it = vars.find(name);
      return it == vars.end() ? nullptr : it->second.c_str();
    };
  }

  CliRun run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = dispatch(args, in, out, err, env());
    return {code, out.str(), err.str()};
  }
};

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_F(CliTest, GridPrintsPaths) {
  TempDir dir;
  const auto r = run({"grid", "--rows", "3", "--cols", "4", "--out", (dir / "g").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(fs::path(l[0]).filename(), "Node.csv");
  EXPECT_TRUE(fs::exists(l[1]));
  EXPECT_EQ(fs::path(l[2]).filename(), "network.svg");
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"grid", "--rows", "0", "--cols", "3"}).code, kExitUsage);
  EXPECT_EQ(run({"grid", "--rows", "3"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  TempDir dir;
  EXPECT_EQ(run({"grid", "--rows", "200", "--cols", "200", "--out", dir.path().string()}).code, kExitUsage);
}

TEST_F(CliTest, HelpIsSuccess) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE((r.out + r.err).find("from-sketch"), std::string::npos);
}

TEST_F(CliTest, RuntimeFailuresExitTwo) {
  TempDir dir;
  const auto r = run({"from-image", "--mask", (dir / "missing.png").string(), "--out", dir.path().string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("IoFailure"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, PlaceFromOsmFile) {
  TempDir dir;
  const auto r = run({"place", "--osm", fixture("crossing.osm").string(), "--out", dir.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out).size(), 3u);
  const auto bad = run({"place", "--osm", fixture("footway.osm").string(), "--out", dir.path().string()});
  EXPECT_EQ(bad.code, kExitFailure);
  EXPECT_NE(bad.err.find("EmptyNetwork"), std::string::npos);
}

TEST_F(CliTest, RenderAndExportSumo) {
  TempDir dir;
  ASSERT_EQ(run({"grid", "--rows", "3", "--cols", "3", "--out", (dir / "g").string()}).code, 0);
  const auto r = run({"render", "--gmns", (dir / "g").string(), "--out", (dir / "x.svg").string(), "--width", "300"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "x.svg").find("width=\"300\""), std::string::npos);

  const auto s = run({"export-sumo", "--gmns", (dir / "g").string(), "--out", (dir / "sumo").string()});
  ASSERT_EQ(s.code, 0) << s.err;
  ASSERT_EQ(lines(s.out).size(), 2u);

  const auto fake = run({"export-sumo", "--gmns", (dir / "g").string(), "--out", (dir / "sumo2").string(),
                         "--netconvert-path", fixture("fake_netconvert_ok.sh").string()});
  EXPECT_EQ(fake.code, 0) << fake.err;
  EXPECT_EQ(lines(fake.out).size(), 3u);

  vars["PATH"] = "/nonexistent";
  const auto missing = run({"export-sumo", "--gmns", (dir / "g").string(), "--out", (dir / "s3").string(), "--netconvert"});
  if (missing.code != 0) {
    EXPECT_EQ(missing.code, kExitFailure);
    EXPECT_NE(missing.err.find("ToolMissing"), std::string::npos) << missing.err;
  }
}

TEST_F(CliTest, ConfigFileScale) {
  TempDir dir;
  spit(dir / "r.ini", "[projection]\nscale = 0.001\n");
  const auto r = run({"--config", (dir / "r.ini").string(), "grid", "--rows", "1", "--cols", "2", "--out",
                      (dir / "g").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "g" / "Node.csv").find("161.566500"), std::string::npos);

  spit(dir / "bad.ini", "[projection]\nscael = 0.001\n");
  EXPECT_EQ(run({"--config", (dir / "bad.ini").string(), "grid", "--rows", "1", "--cols", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"--config", (dir / "none.ini").string(), "grid", "--rows", "1", "--cols", "1"}).code, kExitUsage);
}

TEST_F(CliTest, FlagOverridesConfigFile) {
  TempDir dir;
  spit(dir / "r.ini", "[projection]\nscale = 0.001\n");
  vars["ROADGEN_CONFIG"] = (dir / "r.ini").string();
  const auto r = run({"grid", "--rows", "1", "--cols", "2", "--scale", "0.002", "--out", (dir / "g").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "g" / "Node.csv").find("161.566000"), std::string::npos);
}

TEST_F(CliTest, EvalRouterWithMock) {
  TempDir dir;
  spit(dir / "trials.jsonl",
       R"({"prompt":"3x3 grid","expected_tool":"grid","language":"en","form":"Detailed"}
{"prompt":"map of Springfield","expected_tool":"place","language":"zh","form":"Keywords"}
)");
  const std::string mock = R"([
    [{"action":"grid","args":{"rows":3,"cols":3}}, {"action":"final","answer":"ok"}],
    [{"action":"grid","args":{"rows":2,"cols":2}}, {"action":"place","args":{"name":"Springfield"}},
     {"action":"final","answer":"ok"}]
  ])";
  spit(dir / "mock.json", mock);
  const auto r = run({"eval-router", "--trials", (dir / "trials.jsonl").string(), "--out", (dir / "m.csv").string(),
                      "--mock", (dir / "mock.json").string(), "--logs", (dir / "logs.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = lines(slurp(dir / "m.csv"));
  ASSERT_EQ(csv.size(), 6u);
  EXPECT_EQ(csv[1], "Detailed,1.0000,,1.0000,,0.0000,");
  EXPECT_EQ(csv[3], "Keywords,,0.0000,,2.0000,,0.0000");
  const auto logs = lines(slurp(dir / "logs.jsonl"));
  ASSERT_EQ(logs.size(), 2u);
  const auto second = nlohmann::json::parse(logs[1]);
  EXPECT_EQ(second.at("steps").size(), 2u);
  EXPECT_EQ(second["steps"][0]["observation"], R"(dry-run grid {"cols":2,"rows":2})");

  spit(dir / "short.json", R"([[{"action":"final","answer":"x"}]])");
  EXPECT_EQ(run({"eval-router", "--trials", (dir / "trials.jsonl").string(), "--out", (dir / "n.csv").string(),
                 "--mock", (dir / "short.json").string()})
                .code,
            kExitUsage);
}

TEST_F(CliTest, ChatRunsRequestsFromInput) {
  TempDir dir;
  spit(dir / "mock.json", R"([{"action":"grid","args":{"rows":2,"cols":2}}, {"action":"final","answer":"made it"}])");
  const auto r = run({"chat", "--mock", (dir / "mock.json").string(), "--out", dir.path().string()},
                     "please make a 2x2 grid\n");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(fs::path(l[0]).parent_path().filename(), "grid-001");
  EXPECT_NE(r.err.find("made it"), std::string::npos);
}
