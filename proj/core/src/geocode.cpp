#include "roadgen/geocode.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>

#include "roadgen/error.hpp"
#include "roadgen/http.hpp"

namespace roadgen::osm {

using nlohmann::json;

GeocodeResult geocode(const std::string& name, GeocoderInterface& provider) {
  if (std::all_of(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); })) {
    throw Error(ErrorKind::InvalidArgument, "place name is empty");
  }
  auto found = provider.candidates(name);
  auto it = std::find_if(found.begin(), found.end(), [](const GeoPoint& p) { return is_valid(p); });
  if (it == found.end()) {
    throw Error(ErrorKind::GeocodeNotFound, provider.label() + " has no match for '" + name + "'");
  }
  return {name, *it, provider.label()};
}

std::vector<GeoPoint> FixtureGeocoder::candidates(const std::string& name) {
  auto it = table_.find(name);
  return it == table_.end() ? std::vector<GeoPoint>{} : it->second;
}

namespace {

double number_field(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return out;
  }
  throw Error(ErrorKind::ProviderRejected, "unexpected coordinate value " + v.dump());
}

http::Response query(const HttpGeocoderOptions& opt, const std::string& url, const std::string& who) {
  http::Request req;
  req.url = url;
  req.timeout = opt.timeout;
  req.max_body = 4u << 20;
  req.headers = {{"User-Agent", opt.user_agent}, {"Accept", "application/json"}};
  http::Response res;
  try {
    res = http::send(req);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    throw Error(ErrorKind::ProviderUnreachable, who + ": " + e.what());
  }
  if (res.status == 401 || res.status == 403 || res.status == 429) {
    throw Error(ErrorKind::ProviderRejected, who + " answered HTTP " + std::to_string(res.status));
  }
  if (res.status < 200 || res.status >= 300) {
    throw Error(ErrorKind::ProviderUnreachable, who + " answered HTTP " + std::to_string(res.status));
  }
  return res;
}

json parse_body(const std::string& body, const std::string& who) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ProviderRejected, who + " returned invalid JSON: " + e.what());
  }
}

std::string join_query(const std::string& endpoint, const std::string& params) {
  return endpoint + (endpoint.find('?') == std::string::npos ? "?" : "&") + params;
}

}  // namespace

NominatimGeocoder::NominatimGeocoder(HttpGeocoderOptions options) : options_(std::move(options)) {
  if (options_.endpoint.empty()) options_.endpoint = kDefaultEndpoint;
  http::parse_url(options_.endpoint);
}

std::vector<GeoPoint> NominatimGeocoder::candidates(const std::string& name) {
  std::string params = "q=" + http::url_encode(name) + "&format=json&limit=5";
  if (!options_.api_key.empty()) params += "&key=" + http::url_encode(options_.api_key);
  const auto res = query(options_, join_query(options_.endpoint, params), label());
  const json body = parse_body(res.body, label());
  if (!body.is_array()) throw Error(ErrorKind::ProviderRejected, "nominatim: expected a JSON array");
  std::vector<GeoPoint> out;
  for (const auto& item : body) {
    if (!item.contains("lat") || !item.contains("lon")) continue;
    out.push_back({number_field(item["lon"]), number_field(item["lat"])});
  }
  return out;
}

AmapGeocoder::AmapGeocoder(HttpGeocoderOptions options) : options_(std::move(options)) {
  if (options_.endpoint.empty()) options_.endpoint = kDefaultEndpoint;
  http::parse_url(options_.endpoint);
}

std::vector<GeoPoint> AmapGeocoder::candidates(const std::string& name) {
  if (options_.api_key.empty()) throw Error(ErrorKind::ProviderRejected, "amap: no API key configured");
  const std::string params =
      "address=" + http::url_encode(name) + "&key=" + http::url_encode(options_.api_key) + "&output=JSON";
  const auto res = query(options_, join_query(options_.endpoint, params), label());
  const json body = parse_body(res.body, label());
  if (body.value("status", std::string{}) != "1") {
    throw Error(ErrorKind::ProviderRejected, "amap: " + body.value("info", std::string{"request refused"}));
  }
  std::vector<GeoPoint> out;
  for (const auto& item : body.value("geocodes", json::array())) {
    const std::string loc = item.value("location", std::string{});
    const auto comma = loc.find(',');
    if (comma == std::string::npos) continue;
    out.push_back({number_field(json(loc.substr(0, comma))), number_field(json(loc.substr(comma + 1)))});
  }
  return out;
}

}  // namespace roadgen::osm
