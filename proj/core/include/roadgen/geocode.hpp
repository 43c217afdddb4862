#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "roadgen/geo.hpp"

namespace roadgen::osm {

struct GeocodeResult {
  std::string query;
  GeoPoint point;
  std::string provider;
};

/// A place-name lookup service. Implementations return candidates best
/// first and raise Error{ProviderUnreachable} / Error{ProviderRejected}.
class GeocoderInterface {
 public:
  virtual ~GeocoderInterface() = default;
  virtual std::vector<GeoPoint> candidates(const std::string& name) = 0;
  virtual std::string label() const = 0;
};

/// First candidate for `name`. Throws Error{InvalidArgument} for a blank
/// name and Error{GeocodeNotFound} when the provider has no candidate.
GeocodeResult geocode(const std::string& name, GeocoderInterface& provider);

/// In-memory table, for tests and offline demos.
class FixtureGeocoder : public GeocoderInterface {
 public:
  FixtureGeocoder() = default;
  explicit FixtureGeocoder(std::map<std::string, std::vector<GeoPoint>> table) : table_(std::move(table)) {}

  void add(const std::string& name, GeoPoint p) { table_[name].push_back(p); }
  std::vector<GeoPoint> candidates(const std::string& name) override;
  std::string label() const override { return "fixture"; }

 private:
  std::map<std::string, std::vector<GeoPoint>> table_;
};

struct HttpGeocoderOptions {
  std::string endpoint;
  std::string api_key;
  std::string user_agent = "roadgen/0.3";
  std::chrono::milliseconds timeout{10'000};
};

/// Nominatim-compatible `search?q=...&format=json` endpoint.
class NominatimGeocoder : public GeocoderInterface {
 public:
  static constexpr const char* kDefaultEndpoint = "https://nominatim.openstreetmap.org/search";

  explicit NominatimGeocoder(HttpGeocoderOptions options);
  std::vector<GeoPoint> candidates(const std::string& name) override;
  std::string label() const override { return "nominatim"; }

 private:
  HttpGeocoderOptions options_;
};

/// Amap (Gaode) v3 geocoding endpoint; `location` comes back as "lon,lat".
class AmapGeocoder : public GeocoderInterface {
 public:
  static constexpr const char* kDefaultEndpoint = "https://restapi.amap.com/v3/geocode/geo";

  explicit AmapGeocoder(HttpGeocoderOptions options);
  std::vector<GeoPoint> candidates(const std::string& name) override;
  std::string label() const override { return "amap"; }

 private:
  HttpGeocoderOptions options_;
};

}  // namespace roadgen::osm
