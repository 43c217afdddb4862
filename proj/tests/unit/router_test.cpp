#include <algorithm>
#include <stdexcept>

#include <gtest/gtest.h>

#include "roadgen/pipeline.hpp"
#include "roadgen/router.hpp"
#include "support/error_kind.hpp"
#include "support/tempdir.hpp"

using namespace roadgen;
using namespace roadgen::router;
using roadgen::testing::kind_of;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

Tool echo_tool(std::string name, std::vector<ArgSpec> args = {}) {
  Tool t;
  t.descriptor = {name, "echo tool " + name, std::move(args)};
  t.invoke = [name](const Json& a) { return name + " " + a.dump(); };
  return t;
}

ToolRegistry grid_registry(int* calls = nullptr) {
  ToolRegistry r;
  Tool t;
  t.descriptor = {"grid", "make a grid", {{"rows", "integer"}, {"cols", "integer"}}};
  t.invoke = [calls](const Json& a) {
    if (calls) ++*calls;
    return "out/grid-" + std::to_string(a.at("rows").get<int>()) + "/node.csv\nout/link.csv";
  };
  r.add(t);
  return r;
}

const std::string kGridCall = R"({"action": "grid", "args": {"rows": 3, "cols": 4}})";
const std::string kFinal = R"({"action": "final", "answer": "done"})";

SessionOptions fixed_clock() {
  SessionOptions o;
  o.clock = [t = 0.0]() mutable { return t += 0.5; };
  return o;
}

}  // namespace

TEST(ParseAction, ToolCallWithArgs) {
  const auto a = parse_action("Sure. " + kGridCall + " Let me know.");
  ASSERT_TRUE(std::holds_alternative<ToolCall>(a));
  const auto& call = std::get<ToolCall>(a);
  EXPECT_EQ(call.name, "grid");
  EXPECT_EQ(call.args, (Json{{"rows", 3}, {"cols", 4}}));
}

TEST(ParseAction, FinalAnswer) {
  EXPECT_EQ(std::get<Final>(parse_action(R"({"action":"final","answer":"files at out/"})")).answer, "files at out/");
}

TEST(ParseAction, BareKeys) {
  const auto a = parse_action(R"({action:"grid", args:{rows:3, cols:4}})");
  EXPECT_EQ(std::get<ToolCall>(a).args.at("cols"), 4);
}

TEST(ParseAction, SkipsObjectsWithoutAction) {
  const auto a = parse_action(R"(I considered {"x": 1} and then {"action": "place", "args": {"name": "a {b}"}})");
  EXPECT_EQ(std::get<ToolCall>(a).name, "place");
  EXPECT_EQ(std::get<ToolCall>(a).args.at("name"), "a {b}");
}

TEST(ParseAction, MissingArgsMeansEmptyObject) {
  EXPECT_EQ(std::get<ToolCall>(parse_action(R"({"action":"grid"})")).args, Json::object());
}

TEST(ParseAction, Unparseable) {
  EXPECT_EQ(kind_of([] { parse_action("I would call the grid tool."); }), ErrorKind::Unparseable);
  EXPECT_EQ(kind_of([] { parse_action(R"({"action": "grid", "args": [1, 2]})"); }), ErrorKind::Unparseable);
  EXPECT_EQ(kind_of([] { parse_action(R"({"action": "grid")"); }), ErrorKind::Unparseable);
  EXPECT_EQ(kind_of([] { parse_action(""); }), ErrorKind::Unparseable);
}

TEST(Registry, RejectsBadTools) {
  ToolRegistry r;
  r.add(echo_tool("a"));
  EXPECT_EQ(kind_of([&] { r.add(echo_tool("a")); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { r.add(echo_tool("")); }), ErrorKind::InvalidArgument);
  Tool nodesc = echo_tool("b");
  nodesc.descriptor.description.clear();
  EXPECT_EQ(kind_of([&] { r.add(nodesc); }), ErrorKind::InvalidArgument);
  Tool nofn = echo_tool("c");
  nofn.invoke = nullptr;
  EXPECT_EQ(kind_of([&] { r.add(nofn); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(r.size(), 1u);
  EXPECT_NE(r.find("a"), nullptr);
  EXPECT_EQ(r.find("A"), nullptr);
}

TEST(SystemPrompt, SingleToolMentionedOnce) {
  const auto p = build_system_prompt({{"zebra_tool", "does zebra things", {}}});
  EXPECT_EQ(count(p, "zebra_tool"), 1u);
  EXPECT_NE(p.find("does zebra things"), std::string::npos);
}

TEST(SystemPrompt, OrderIndependent) {
  ToolDescriptor a{"alpha", "first", {{"x", "integer"}}};
  ToolDescriptor b{"beta", "second", {{"y", "text", false}}};
  EXPECT_EQ(build_system_prompt({a, b}), build_system_prompt({b, a}));
  const auto p = build_system_prompt({b, a});
  EXPECT_LT(p.find("alpha"), p.find("beta"));
  EXPECT_NE(p.find("x (integer, required)"), std::string::npos);
  EXPECT_NE(p.find("y (text, optional)"), std::string::npos);
}

TEST(SystemPrompt, EmptyRegistry) {
  EXPECT_EQ(kind_of([] { build_system_prompt({}); }), ErrorKind::EmptyRegistry);
}

TEST(SystemPrompt, DefaultToolsSnapshot) {
  const auto p = build_system_prompt(pipeline::default_descriptors());
  for (const char* name : {"grid", "place", "from-image", "from-sketch"}) {
    EXPECT_NE(p.find("- " + std::string(name) + ":"), std::string::npos) << name;
  }
  EXPECT_EQ(p, roadgen::testing::slurp(roadgen::testing::fixture("system_prompt.txt")));
}

TEST(Script, JsonArrayAndLines) {
  EXPECT_EQ(load_script(R"(["a", {"action": "final", "answer": "x"}])"),
            (std::vector<std::string>{"a", R"({"action":"final","answer":"x"})"}));
  EXPECT_EQ(load_script("one\n\n  two  \n"), (std::vector<std::string>{"one", "  two  "}));
}

TEST(Session, OneCallThenFinal) {
  int calls = 0;
  const auto reg = grid_registry(&calls);
  ScriptedModel model({kGridCall, kFinal});
  const auto log = run_session("make a 3x4 grid", reg, model, fixed_clock());
  EXPECT_EQ(log.end, SessionEnd::Final);
  EXPECT_EQ(log.answer, "done");
  EXPECT_EQ(log.step_count(), 1u);
  EXPECT_EQ(calls, 1);
  EXPECT_FALSE(log.steps[0].failed);
  EXPECT_DOUBLE_EQ(log.steps[0].seconds, 0.5);
  EXPECT_EQ(model.calls(), 2u);
}

TEST(Session, ConversationShape) {
  const auto reg = grid_registry();
  ScriptedModel model({kGridCall, kFinal});
  run_session("make a 3x4 grid", reg, model);
  const auto& second = model.conversations().at(1);
  ASSERT_EQ(second.size(), 4u);
  EXPECT_EQ(second[0].role, "system");
  EXPECT_EQ(second[0].content, build_system_prompt(reg.descriptors()));
  EXPECT_EQ(second[1], (ChatMessage{"user", "make a 3x4 grid"}));
  EXPECT_EQ(second[2], (ChatMessage{"assistant", kGridCall}));
  EXPECT_EQ(second[3].role, "user");
  EXPECT_NE(second[3].content.find("out/grid-3/node.csv\nout/link.csv"), std::string::npos);
}

TEST(Session, StopsAtMaxSteps) {
  int calls = 0;
  const auto reg = grid_registry(&calls);
  ScriptedModel model(std::vector<std::string>(10, kGridCall));
  const auto log = run_session("loop", reg, model);
  EXPECT_EQ(log.end, SessionEnd::MaxSteps);
  EXPECT_EQ(log.step_count(), 5u);
  EXPECT_EQ(calls, 5);
  EXPECT_EQ(model.calls(), 5u);
  EXPECT_FALSE(log.abort_reason.empty());

  ScriptedModel again(std::vector<std::string>(10, kGridCall));
  SessionOptions two;
  two.max_steps = 2;
  EXPECT_EQ(run_session("loop", reg, again, two).step_count(), 2u);
}

TEST(Session, UnknownToolThenCorrection) {
  const auto reg = grid_registry();
  ScriptedModel model({R"({"action": "grdi", "args": {"rows": 3, "cols": 4}})", kGridCall, kFinal});
  const auto log = run_session("grid please", reg, model);
  ASSERT_EQ(log.step_count(), 2u);
  EXPECT_TRUE(log.steps[0].failed);
  EXPECT_EQ(log.steps[0].call.name, "grdi");
  EXPECT_NE(log.steps[0].observation.find("unknown tool"), std::string::npos) << log.steps[0].observation;
  EXPECT_FALSE(log.steps[1].failed);
  EXPECT_EQ(log.end, SessionEnd::Final);
}

TEST(Session, MissingArgumentAndThrowingTool) {
  ToolRegistry reg = grid_registry();
  Tool boom = echo_tool("boom");
  boom.invoke = [](const Json&) -> std::string { throw std::runtime_error("disk full"); };
  reg.add(boom);
  ScriptedModel model({R"({"action":"grid","args":{"rows":3}})", R"({"action":"boom"})", kFinal});
  const auto log = run_session("x", reg, model);
  ASSERT_EQ(log.step_count(), 2u);
  EXPECT_TRUE(log.steps[0].failed);
  EXPECT_NE(log.steps[0].observation.find("cols"), std::string::npos);
  EXPECT_TRUE(log.steps[1].failed);
  EXPECT_NE(log.steps[1].observation.find("disk full"), std::string::npos);
}

TEST(Session, ObservationIsVerbatim) {
  const std::string raw = "  /tmp/weird path/with\ttab\n\n\"quoted\" {json} \xe4\xb8\xad\n";
  ToolRegistry reg;
  Tool t = echo_tool("raw");
  t.invoke = [raw](const Json&) { return raw; };
  reg.add(t);
  ScriptedModel model({R"({"action":"raw"})", kFinal});
  const auto log = run_session("x", reg, model);
  ASSERT_EQ(log.step_count(), 1u);
  EXPECT_EQ(log.steps[0].observation, raw);
  EXPECT_NE(model.conversations()[1].back().content.find(raw), std::string::npos);
}

TEST(Session, UnparseableOnceThenTwice) {
  const auto reg = grid_registry();
  ScriptedModel recovers({"hmm, not sure", kGridCall, kFinal});
  const auto ok = run_session("x", reg, recovers);
  EXPECT_EQ(ok.end, SessionEnd::Final);
  EXPECT_EQ(ok.step_count(), 1u);

  ScriptedModel gives_up({"hmm", "still thinking", kFinal});
  const auto bad = run_session("x", reg, gives_up);
  EXPECT_EQ(bad.end, SessionEnd::Unparseable);
  EXPECT_EQ(bad.step_count(), 0u);
  EXPECT_EQ(gives_up.calls(), 2u);
}

namespace {

class FlakyModel : public ModelClientInterface {
 public:
  explicit FlakyModel(int failures) : failures_(failures) {}
  std::string reply(const std::vector<ChatMessage>&) override {
    ++calls;
    if (failures_-- > 0) throw Error(ErrorKind::ModelUnreachable, "connection reset");
    return kFinal;
  }
  int calls = 0;

 private:
  int failures_;
};

}  // namespace

TEST(Session, TransportRetriedOnce) {
  const auto reg = grid_registry();
  FlakyModel once(1);
  EXPECT_EQ(run_session("x", reg, once).end, SessionEnd::Final);
  EXPECT_EQ(once.calls, 2);
  FlakyModel twice(2);
  EXPECT_EQ(kind_of([&] { run_session("x", reg, twice); }), ErrorKind::ModelUnreachable);
  EXPECT_EQ(twice.calls, 2);
}

TEST(Session, BadOptions) {
  const auto reg = grid_registry();
  ScriptedModel m({kFinal});
  SessionOptions o;
  o.max_steps = 0;
  EXPECT_EQ(kind_of([&] { run_session("x", reg, m, o); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { run_session("x", ToolRegistry{}, m); }), ErrorKind::EmptyRegistry);
}

TEST(Session, DeterministicAndJsonRoundTrip) {
  const auto reg = grid_registry();
  ScriptedModel a({"{action: \"grdi\"}", kGridCall, kGridCall, kFinal});
  ScriptedModel b({"{action: \"grdi\"}", kGridCall, kGridCall, kFinal});
  const auto la = run_session("r", reg, a, fixed_clock());
  const auto lb = run_session("r", reg, b, fixed_clock());
  EXPECT_EQ(to_json(la).dump(), to_json(lb).dump());
  const auto back = session_from_json(to_json(la));
  EXPECT_EQ(to_json(back).dump(), to_json(la).dump());
  EXPECT_EQ(back.step_count(), 3u);
  EXPECT_EQ(to_string(back.end), "final");
}
