#include "roadgen/osm_fetch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "roadgen/error.hpp"

namespace roadgen::osm {

namespace {

constexpr double kBoxMetersPerDegree = 111'195.0;

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7f", v);
  return buf;
}

}  // namespace

BoundingBox bbox_around(const GeoPoint& center, double radius_m) {
  if (!is_valid(center)) throw Error(ErrorKind::InvalidArgument, "center is not a valid lon/lat");
  if (!(radius_m > 0.0) || radius_m > kMaxSearchRadiusM) {
    std::ostringstream os;
    os << "radius " << radius_m << " m outside (0, " << kMaxSearchRadiusM << "]";
    throw Error(ErrorKind::RadiusOutOfRange, os.str());
  }
  if (std::abs(center.lat) > 85.0) {
    throw Error(ErrorKind::PolarUndefined, "longitude span undefined near the poles");
  }
  const double dlat = radius_m / kBoxMetersPerDegree;
  const double dlon = dlat / std::cos(center.lat * std::numbers::pi / 180.0);
  return {std::max(-90.0, center.lat - dlat), std::max(-180.0, center.lon - dlon),
          std::min(90.0, center.lat + dlat), std::min(180.0, center.lon + dlon)};
}

std::string overpass_query(const BoundingBox& b, int timeout_s) {
  const std::string box =
      coord(b.min_lat) + "," + coord(b.min_lon) + "," + coord(b.max_lat) + "," + coord(b.max_lon);
  return "[out:xml][timeout:" + std::to_string(timeout_s) + "];(way[\"highway\"](" + box +
         ");>;);out body;";
}

std::string fetch_osm(const BoundingBox& bbox, const FetchOptions& options) {
  const http::Url url = http::parse_url(options.endpoint);
  OsmApi api = options.api;
  if (api == OsmApi::Auto) {
    const std::string path = url.target.substr(0, url.target.find('?'));
    api = path.ends_with("interpreter") ? OsmApi::Overpass : OsmApi::MapCall;
  }

  http::Request req;
  req.timeout = options.timeout;
  req.max_body = options.max_bytes;
  req.headers = {{"User-Agent", options.user_agent}};
  if (api == OsmApi::Overpass) {
    const int timeout_s = std::max<int>(1, static_cast<int>(options.timeout.count() / 1000));
    req.method = "POST";
    req.url = options.endpoint;
    req.content_type = "application/x-www-form-urlencoded";
    req.body = "data=" + http::url_encode(overpass_query(bbox, timeout_s));
  } else {
    req.url = options.endpoint + (options.endpoint.find('?') == std::string::npos ? "?" : "&") + "bbox=" +
              coord(bbox.min_lon) + "," + coord(bbox.min_lat) + "," + coord(bbox.max_lon) + "," +
              coord(bbox.max_lat);
  }

  http::Response res = http::send(req);
  if (res.status < 200 || res.status >= 300) {
    std::string snippet = res.body.substr(0, 200);
    throw Error(ErrorKind::HttpFailure,
                req.url + " answered HTTP " + std::to_string(res.status) + (snippet.empty() ? "" : ": " + snippet));
  }
  return std::move(res.body);
}

}  // namespace roadgen::osm
