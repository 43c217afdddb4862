#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "roadgen/geo.hpp"
#include "roadgen/http.hpp"

namespace roadgen::osm {

inline constexpr double kDefaultSearchRadiusM = 1'000.0;
inline constexpr double kMaxSearchRadiusM = 50'000.0;

struct BoundingBox {
  double min_lat = 0.0;
  double min_lon = 0.0;
  double max_lat = 0.0;
  double max_lon = 0.0;

  bool contains(const BoundingBox& other) const {
    return min_lat <= other.min_lat && min_lon <= other.min_lon && max_lat >= other.max_lat &&
           max_lon >= other.max_lon;
  }
};

/// Square-ish box of half-size `radius_m` around `center`: the latitude
/// half-width is radius / 111,195 m and the longitude half-width is that
/// divided by cos(lat), clamped to valid ranges.
/// Throws Error{RadiusOutOfRange} outside (0, 50 km], Error{PolarUndefined}
/// for |lat| > 85.
BoundingBox bbox_around(const GeoPoint& center, double radius_m);

enum class OsmApi {
  Auto,      // Overpass when the endpoint path ends in "interpreter"
  Overpass,  // POST data=<query>
  MapCall,   // GET <endpoint>?bbox=w,s,e,n (OSM API 0.6 /map)
};

struct FetchOptions {
  static constexpr const char* kDefaultEndpoint = "https://overpass-api.de/api/interpreter";

  std::string endpoint = kDefaultEndpoint;
  OsmApi api = OsmApi::Auto;
  std::chrono::milliseconds timeout{60'000};
  std::size_t max_bytes = http::kDefaultMaxBody;
  std::string user_agent = "roadgen/0.3";
};

/// Overpass QL selecting every highway way in the box plus its nodes.
std::string overpass_query(const BoundingBox& bbox, int timeout_s);

/// Downloads raw OSM XML for the box; the body is returned unmodified.
/// Throws Error{HttpFailure} for transport errors or non-2xx statuses and
/// Error{PayloadTooLarge} beyond max_bytes.
std::string fetch_osm(const BoundingBox& bbox, const FetchOptions& options = {});

}  // namespace roadgen::osm
