#include "roadgen/http.hpp"

#include <httplib.h>

#include <cctype>
#include <charconv>
#include <thread>

#include "roadgen/error.hpp"

namespace roadgen::http {

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

Url parse_url(std::string_view url) {
  auto bad = [&] { return Error(ErrorKind::InvalidArgument, "not an absolute http(s) URL: '" + std::string(url) + "'"); };
  Url u;
  const auto sep = url.find("://");
  if (sep == std::string_view::npos) throw bad();
  u.scheme = std::string(url.substr(0, sep));
  for (auto& c : u.scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (u.scheme != "http" && u.scheme != "https") throw bad();
  std::string_view rest = url.substr(sep + 3);
  const auto slash = rest.find_first_of("/?");
  std::string_view authority = rest.substr(0, slash);
  u.target = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  if (!u.target.empty() && u.target.front() == '?') u.target.insert(0, "/");
  if (authority.empty()) throw bad();

  u.port = u.scheme == "https" ? 443 : 80;
  if (authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) throw bad();
    u.host = std::string(authority.substr(1, close - 1));
    authority.remove_prefix(close + 1);
  } else {
    const auto colon = authority.find(':');
    u.host = std::string(authority.substr(0, colon));
    authority = colon == std::string_view::npos ? std::string_view{} : authority.substr(colon);
  }
  if (!authority.empty()) {
    if (authority.front() != ':') throw bad();
    authority.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(authority.data(), authority.data() + authority.size(), u.port);
    if (ec != std::errc{} || ptr != authority.data() + authority.size() || u.port <= 0 || u.port > 65535) {
      throw bad();
    }
  }
  if (u.host.empty()) throw bad();
  return u;
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

namespace {

struct Attempt {
  bool ok = false;
  bool too_large = false;
  httplib::Error error = httplib::Error::Success;
  Response response;
};

Attempt attempt(const Request& request, const Url& url) {
  Attempt a;
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.scheme == "https") {
    throw Error(ErrorKind::HttpFailure, "built without TLS support; cannot reach " + request.url);
  }
#endif
  httplib::Client client(url.origin());
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);

  httplib::Request req;
  req.method = request.method;
  req.path = url.target;
  for (const auto& [k, v] : request.headers) req.headers.emplace(k, v);
  if (!request.body.empty() || request.method == "POST") {
    req.body = request.body;
    req.headers.emplace("Content-Type",
                        request.content_type.empty() ? "application/octet-stream" : request.content_type);
  }
  req.content_receiver = [&a, &request](const char* data, std::size_t len, std::uint64_t, std::uint64_t) {
    if (a.response.body.size() + len > request.max_body) {
      a.too_large = true;
      return false;
    }
    a.response.body.append(data, len);
    return true;
  };

  httplib::Response res;
  a.ok = client.send(req, res, a.error);
  a.response.status = res.status;
  return a;
}

}  // namespace

Response send(const Request& request) {
  const Url url = parse_url(request.url);
  Attempt a = attempt(request, url);
  if (!a.ok && !a.too_large && request.retry_backoff.count() > 0) {
    std::this_thread::sleep_for(request.retry_backoff);
    a = attempt(request, url);
  }
  if (a.too_large) {
    throw Error(ErrorKind::PayloadTooLarge,
                request.url + " returned more than " + std::to_string(request.max_body) + " bytes");
  }
  if (!a.ok) {
    throw Error(ErrorKind::HttpFailure, request.method + " " + request.url + ": " + httplib::to_string(a.error));
  }
  return std::move(a.response);
}

}  // namespace roadgen::http
