#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace roadgen::router {

using Json = nlohmann::json;

struct ArgSpec {
  std::string name;
  std::string type;  // semantic type shown to the model: "integer", "path", "text", ...
  bool required = true;
};

struct ToolDescriptor {
  std::string name;
  std::string description;
  std::vector<ArgSpec> args;
};

/// A tool returns its observation text (typically produced file paths, one
/// per line). Throwing reports the failure back to the model.
using ToolFn = std::function<std::string(const Json& args)>;

struct Tool {
  ToolDescriptor descriptor;
  ToolFn invoke;
};

/// Immutable once built; lookups are by exact name.
class ToolRegistry {
 public:
  /// Throws Error{InvalidArgument} on a duplicate or empty name, an empty
  /// description, or a missing callable.
  void add(Tool tool);

  const Tool* find(std::string_view name) const;
  std::vector<ToolDescriptor> descriptors() const;  // sorted by name
  std::size_t size() const { return tools_.size(); }
  bool empty() const { return tools_.empty(); }

 private:
  std::map<std::string, Tool, std::less<>> tools_;
};

/// Deterministic system prompt: tools sorted by name with their
/// descriptions and arguments, the reply format, the rule against
/// inventing data and the finish condition.
/// Throws Error{EmptyRegistry} when `tools` is empty.
std::string build_system_prompt(std::vector<ToolDescriptor> tools);

struct ToolCall {
  std::string name;
  Json args = Json::object();

  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct Final {
  std::string answer;

  friend bool operator==(const Final&, const Final&) = default;
};

using Action = std::variant<ToolCall, Final>;

/// First JSON object in the reply that carries a string "action" member,
/// ignoring any prose around it. Bare identifiers used as keys are
/// accepted. {"action": "final", "answer": ...} is Final; any other action
/// is a ToolCall whose "args" must be an object when present.
/// Throws Error{Unparseable} when no such object exists.
Action parse_action(std::string_view reply);

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

class ModelClientInterface {
 public:
  virtual ~ModelClientInterface() = default;

  /// Next assistant reply for the conversation so far. Transport problems
  /// throw Error{ModelUnreachable}.
  virtual std::string reply(const std::vector<ChatMessage>& conversation) = 0;
};

/// Replays a fixed list of replies in order and records every
/// conversation it was shown. Running out of replies counts as
/// ModelUnreachable.
class ScriptedModel : public ModelClientInterface {
 public:
  explicit ScriptedModel(std::vector<std::string> replies) : replies_(std::move(replies)) {}

  std::string reply(const std::vector<ChatMessage>& conversation) override;

  std::size_t calls() const { return seen_.size(); }
  const std::vector<std::vector<ChatMessage>>& conversations() const { return seen_; }

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
  std::vector<std::vector<ChatMessage>> seen_;
};

/// Reads a script for ScriptedModel: a JSON array of strings (objects are
/// serialised to their JSON text), or else one reply per non-empty line.
std::vector<std::string> load_script(const std::string& text);

struct ChatEndpoint {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  std::string api_key;
  int timeout_s = 60;

  /// ROADGEN_MODEL_BASE_URL, ROADGEN_MODEL_NAME and ROADGEN_MODEL_API_KEY
  /// override the fields above when set.
  static ChatEndpoint from_env(ChatEndpoint base);
  static ChatEndpoint from_env() { return from_env(ChatEndpoint{}); }
};

/// OpenAI-style chat-completions client: POST {base_url}/chat/completions
/// at temperature 0, reply taken from choices[0].message.content.
class HttpChatModel : public ModelClientInterface {
 public:
  explicit HttpChatModel(ChatEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

  std::string reply(const std::vector<ChatMessage>& conversation) override;

 private:
  ChatEndpoint endpoint_;
};

struct Step {
  ToolCall call;
  std::string observation;
  double seconds = 0.0;
  bool failed = false;  // unknown tool, bad arguments or a thrown tool error
};

enum class SessionEnd { Final, MaxSteps, Unparseable };

struct SessionLog {
  std::string request;
  std::vector<Step> steps;
  SessionEnd end = SessionEnd::Final;
  std::string answer;        // the Final answer when end == Final
  std::string abort_reason;  // otherwise

  std::size_t step_count() const { return steps.size(); }
};

std::string_view to_string(SessionEnd end);

struct SessionOptions {
  int max_steps = 5;
  /// Seconds on a monotonic clock; injectable so logs can be reproduced.
  std::function<double()> clock;
};

/// The select, invoke, assess loop. Each model reply is parsed; a ToolCall
/// runs the named tool and its output goes back to the model verbatim;
/// Final ends the session. Unknown tools and tool failures become error
/// observations and still count as steps. An unparseable reply is pointed
/// out to the model once; a second one in a row ends the session. After
/// max_steps invocations without Final the session ends without asking
/// the model again. A model transport failure is retried once, then
/// Error{ModelUnreachable} propagates.
/// Throws Error{EmptyRegistry} or Error{InvalidArgument} for max_steps < 1.
SessionLog run_session(const std::string& request, const ToolRegistry& registry, ModelClientInterface& model,
                       const SessionOptions& options = {});

Json to_json(const SessionLog& log);
SessionLog session_from_json(const Json& j);

}  // namespace roadgen::router
