#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace roadgen::http {

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string target;  // path plus query, starting with '/'

  std::string origin() const;
};

/// Throws Error{InvalidArgument} for anything but absolute http(s) URLs.
Url parse_url(std::string_view url);

std::string url_encode(std::string_view s);

inline constexpr std::size_t kDefaultMaxBody = 64u << 20;

struct Request {
  std::string method = "GET";
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::string content_type;
  std::chrono::milliseconds timeout{30'000};
  std::size_t max_body = kDefaultMaxBody;
  /// Transport failures are retried once after this delay; zero disables.
  std::chrono::milliseconds retry_backoff{500};
};

struct Response {
  int status = 0;
  std::string body;
};

/// Sends one request. Non-2xx statuses are returned, not thrown. Transport
/// failures throw Error{HttpFailure}; bodies beyond max_body throw
/// Error{PayloadTooLarge}.
Response send(const Request& request);

}  // namespace roadgen::http
