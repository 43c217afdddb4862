#include "roadgen/router.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <sstream>

#include "roadgen/error.hpp"

namespace roadgen::router {

void ToolRegistry::add(Tool tool) {
  const auto& d = tool.descriptor;
  if (d.name.empty()) throw Error(ErrorKind::InvalidArgument, "tool name must not be empty");
  if (d.description.empty()) throw Error(ErrorKind::InvalidArgument, "tool '" + d.name + "' has no description");
  if (!tool.invoke) throw Error(ErrorKind::InvalidArgument, "tool '" + d.name + "' has no implementation");
  if (tools_.contains(d.name)) throw Error(ErrorKind::InvalidArgument, "duplicate tool name '" + d.name + "'");
  std::string name = d.name;
  tools_.emplace(std::move(name), std::move(tool));
}

const Tool* ToolRegistry::find(std::string_view name) const {
  auto it = tools_.find(name);
  return it == tools_.end() ? nullptr : &it->second;
}

std::vector<ToolDescriptor> ToolRegistry::descriptors() const {
  std::vector<ToolDescriptor> out;
  out.reserve(tools_.size());
  for (const auto& [name, tool] : tools_) out.push_back(tool.descriptor);
  return out;
}

std::string build_system_prompt(std::vector<ToolDescriptor> tools) {
  if (tools.empty()) throw Error(ErrorKind::EmptyRegistry, "no tools registered");
  std::sort(tools.begin(), tools.end(), [](const auto& a, const auto& b) { return a.name < b.name; });

  std::ostringstream os;
  os << "You build road networks for traffic simulation by calling tools.\n"
        "Pick the tool that matches the user's request, call it, read its output, "
        "and decide whether the request is fulfilled.\n\n";
  os << "Tools:\n";
  for (const auto& t : tools) {
    os << "- " << t.name << ": " << t.description << "\n";
    if (t.args.empty()) {
      os << "  arguments: none\n";
      continue;
    }
    os << "  arguments:\n";
    for (const auto& a : t.args) {
      os << "    " << a.name << " (" << a.type << (a.required ? ", required" : ", optional") << ")\n";
    }
  }
  os << "\nReply with exactly one JSON object and nothing else.\n"
        "To call a tool: {\"action\": \"<tool name>\", \"args\": {<argument>: <value>, ...}}\n"
        "To finish: {\"action\": \"final\", \"answer\": \"<message for the user>\"}\n\n"
        "Rules:\n"
        "- Use only values the user gave you or that a tool returned. Never invent coordinates, "
        "file paths, place names or numbers.\n"
        "- If a required argument is missing from the request, finish and ask the user for it.\n"
        "- Once a tool has produced the requested files, finish and list the file paths exactly "
        "as the tool returned them.\n";
  return os.str();
}

namespace {

/// Balanced {...} starting at `open`, skipping braces inside strings.
std::optional<std::string_view> balanced_object(std::string_view s, std::size_t open) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return s.substr(open, i - open + 1);
    }
  }
  return std::nullopt;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

/// Quotes bare identifiers in key position: {action: "x"} -> {"action": "x"}.
std::string quote_bare_keys(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 16);
  bool in_string = false;
  char prev_significant = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < s.size()) {
        out += s[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      prev_significant = c;
      continue;
    }
    if (ident_start(c) && (prev_significant == '{' || prev_significant == ',')) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::size_t k = j;
      while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
      if (k < s.size() && s[k] == ':') {
        out += '"';
        out.append(s.substr(i, j - i));
        out += '"';
        i = j - 1;
        prev_significant = '"';
        continue;
      }
    }
    out += c;
    if (!std::isspace(static_cast<unsigned char>(c))) prev_significant = c;
  }
  return out;
}

std::optional<Json> parse_object(std::string_view text) {
  for (const std::string& candidate : {std::string(text), quote_bare_keys(text)}) {
    Json j = Json::parse(candidate, nullptr, false);
    if (!j.is_discarded() && j.is_object()) return j;
  }
  return std::nullopt;
}

std::optional<Action> to_action(const Json& j) {
  auto it = j.find("action");
  if (it == j.end() || !it->is_string()) return std::nullopt;
  const std::string name = it->get<std::string>();
  if (name == "final") {
    auto a = j.find("answer");
    if (a == j.end()) return Final{};
    return Final{a->is_string() ? a->get<std::string>() : a->dump()};
  }
  if (name.empty()) return std::nullopt;
  ToolCall call{name, Json::object()};
  if (auto a = j.find("args"); a != j.end() && !a->is_null()) {
    if (!a->is_object()) return std::nullopt;
    call.args = *a;
  }
  return call;
}

}  // namespace

Action parse_action(std::string_view reply) {
  for (std::size_t pos = reply.find('{'); pos != std::string_view::npos; pos = reply.find('{', pos + 1)) {
    auto obj = balanced_object(reply, pos);
    if (!obj) continue;
    auto j = parse_object(*obj);
    if (!j) continue;
    if (auto action = to_action(*j)) return *action;
  }
  std::string head(reply.substr(0, 80));
  throw Error(ErrorKind::Unparseable, "no action object in reply: " + head);
}

std::string ScriptedModel::reply(const std::vector<ChatMessage>& conversation) {
  seen_.push_back(conversation);
  if (next_ >= replies_.size()) throw Error(ErrorKind::ModelUnreachable, "scripted replies exhausted");
  return replies_[next_++];
}

std::vector<std::string> load_script(const std::string& text) {
  std::vector<std::string> out;
  Json j = Json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_array()) {
    for (const auto& item : j) out.push_back(item.is_string() ? item.get<std::string>() : item.dump());
    return out;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back(line);
  }
  return out;
}

std::string_view to_string(SessionEnd end) {
  switch (end) {
    case SessionEnd::Final:
      return "final";
    case SessionEnd::MaxSteps:
      return "max_steps";
    case SessionEnd::Unparseable:
      return "unparseable";
  }
  return "unknown";
}

namespace {

std::string ask(ModelClientInterface& model, const std::vector<ChatMessage>& conversation) {
  try {
    return model.reply(conversation);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ModelUnreachable) throw;
  }
  return model.reply(conversation);
}

std::optional<std::string> missing_argument(const ToolDescriptor& d, const Json& args) {
  for (const auto& a : d.args) {
    if (a.required && !args.contains(a.name)) return a.name;
  }
  return std::nullopt;
}

double steady_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

}  // namespace

SessionLog run_session(const std::string& request, const ToolRegistry& registry, ModelClientInterface& model,
                       const SessionOptions& options) {
  if (registry.empty()) throw Error(ErrorKind::EmptyRegistry, "no tools registered");
  if (options.max_steps < 1) throw Error(ErrorKind::InvalidArgument, "max_steps must be >= 1");
  const auto clock = options.clock ? options.clock : steady_seconds;

  SessionLog log;
  log.request = request;
  std::vector<ChatMessage> conversation{{"system", build_system_prompt(registry.descriptors())},
                                        {"user", request}};
  bool last_unparseable = false;

  while (true) {
    const std::string reply = ask(model, conversation);
    conversation.push_back({"assistant", reply});

    Action action;
    try {
      action = parse_action(reply);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unparseable) throw;
      if (last_unparseable) {
        log.end = SessionEnd::Unparseable;
        log.abort_reason = "two consecutive replies without an action object";
        return log;
      }
      last_unparseable = true;
      conversation.push_back({"user",
                              "Your reply did not contain an action object. Reply with one JSON object "
                              "such as {\"action\": \"<tool name>\", \"args\": {...}} or "
                              "{\"action\": \"final\", \"answer\": \"...\"}."});
      continue;
    }
    last_unparseable = false;

    if (auto* fin = std::get_if<Final>(&action)) {
      log.end = SessionEnd::Final;
      log.answer = fin->answer;
      return log;
    }

    auto& call = std::get<ToolCall>(action);
    Step step;
    step.call = call;
    const double started = clock();
    if (const Tool* tool = registry.find(call.name); !tool) {
      step.failed = true;
      step.observation = "error: unknown tool '" + call.name + "'";
    } else if (auto missing = missing_argument(tool->descriptor, call.args)) {
      step.failed = true;
      step.observation = "error: missing required argument '" + *missing + "' for tool '" + call.name + "'";
    } else {
      try {
        step.observation = tool->invoke(call.args);
      } catch (const std::exception& e) {
        step.failed = true;
        step.observation = std::string("error: ") + e.what();
      }
    }
    step.seconds = clock() - started;
    log.steps.push_back(step);

    if (static_cast<int>(log.steps.size()) >= options.max_steps) {
      log.end = SessionEnd::MaxSteps;
      log.abort_reason = "reached max_steps = " + std::to_string(options.max_steps);
      return log;
    }
    conversation.push_back({"user", "Observation from " + call.name + ":\n" + step.observation});
  }
}

Json to_json(const SessionLog& log) {
  Json steps = Json::array();
  for (const auto& s : log.steps) {
    steps.push_back({{"tool", s.call.name},
                     {"args", s.call.args},
                     {"observation", s.observation},
                     {"seconds", s.seconds},
                     {"failed", s.failed}});
  }
  Json j{{"request", log.request}, {"steps", steps}, {"end", std::string(to_string(log.end))}};
  if (log.end == SessionEnd::Final) {
    j["answer"] = log.answer;
  } else {
    j["abort_reason"] = log.abort_reason;
  }
  return j;
}

SessionLog session_from_json(const Json& j) {
  try {
    SessionLog log;
    log.request = j.at("request").get<std::string>();
    for (const auto& s : j.at("steps")) {
      Step step;
      step.call.name = s.at("tool").get<std::string>();
      step.call.args = s.value("args", Json::object());
      step.observation = s.value("observation", std::string());
      step.seconds = s.value("seconds", 0.0);
      step.failed = s.value("failed", false);
      log.steps.push_back(std::move(step));
    }
    const std::string end = j.value("end", std::string("final"));
    if (end == "final") {
      log.end = SessionEnd::Final;
      log.answer = j.value("answer", std::string());
    } else if (end == "max_steps") {
      log.end = SessionEnd::MaxSteps;
      log.abort_reason = j.value("abort_reason", std::string());
    } else if (end == "unparseable") {
      log.end = SessionEnd::Unparseable;
      log.abort_reason = j.value("abort_reason", std::string());
    } else {
      throw Error(ErrorKind::ParseError, "unknown session end '" + end + "'");
    }
    return log;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("session log: ") + e.what());
  }
}

}  // namespace roadgen::router
