#include <cstdlib>

#include "roadgen/error.hpp"
#include "roadgen/http.hpp"
#include "roadgen/router.hpp"

namespace roadgen::router {

namespace {

void override_from(const char* var, std::string& field) {
  if (const char* v = std::getenv(var); v && *v) field = v;
}

}  // namespace

ChatEndpoint ChatEndpoint::from_env(ChatEndpoint base) {
  override_from("ROADGEN_MODEL_BASE_URL", base.base_url);
  override_from("ROADGEN_MODEL_NAME", base.model);
  override_from("ROADGEN_MODEL_API_KEY", base.api_key);
  return base;
}

std::string HttpChatModel::reply(const std::vector<ChatMessage>& conversation) {
  Json messages = Json::array();
  for (const auto& m : conversation) messages.push_back({{"role", m.role}, {"content", m.content}});
  const Json payload{{"model", endpoint_.model}, {"temperature", 0}, {"messages", messages}};

  std::string base = endpoint_.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();

  http::Request req;
  req.method = "POST";
  req.url = base + "/chat/completions";
  req.body = payload.dump();
  req.content_type = "application/json";
  req.timeout = std::chrono::seconds(endpoint_.timeout_s);
  req.retry_backoff = std::chrono::milliseconds(0);  // run_session owns the retry
  if (!endpoint_.api_key.empty()) req.headers.emplace_back("Authorization", "Bearer " + endpoint_.api_key);

  http::Response resp;
  try {
    resp = http::send(req);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    throw Error(ErrorKind::ModelUnreachable, e.what());
  }
  if (resp.status < 200 || resp.status >= 300) {
    throw Error(ErrorKind::ModelUnreachable,
                "chat endpoint " + req.url + " returned HTTP " + std::to_string(resp.status));
  }

  const Json j = Json::parse(resp.body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::ModelUnreachable, "chat endpoint returned non-JSON body");
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    return content.is_string() ? content.get<std::string>() : content.dump();
  } catch (const Json::exception&) {
    throw Error(ErrorKind::ModelUnreachable, "chat response lacks choices[0].message.content");
  }
}

}  // namespace roadgen::router
