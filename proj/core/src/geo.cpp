#include "roadgen/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "roadgen/error.hpp"

namespace roadgen {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ProjectionOutOfRange: return "ProjectionOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ReferentialError: return "ReferentialError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ToolMissing: return "ToolMissing";
    case ErrorKind::ToolFailed: return "ToolFailed";
    case ErrorKind::SpecInvalid: return "SpecInvalid";
    case ErrorKind::GeocodeNotFound: return "GeocodeNotFound";
    case ErrorKind::ProviderUnreachable: return "ProviderUnreachable";
    case ErrorKind::ProviderRejected: return "ProviderRejected";
    case ErrorKind::RadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorKind::PolarUndefined: return "PolarUndefined";
    case ErrorKind::HttpFailure: return "HttpFailure";
    case ErrorKind::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorKind::XmlMalformed: return "XmlMalformed";
    case ErrorKind::DanglingRef: return "DanglingRef";
    case ErrorKind::EmptyNetwork: return "EmptyNetwork";
    case ErrorKind::ImageEmpty: return "ImageEmpty";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::NoCornersFound: return "NoCornersFound";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::EmptyRegistry: return "EmptyRegistry";
    case ErrorKind::Unparseable: return "Unparseable";
    case ErrorKind::ModelUnreachable: return "ModelUnreachable";
    case ErrorKind::Misaligned: return "Misaligned";
  }
  return "Unknown";
}

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lon >= -180.0 && p.lon <= 180.0 &&
         p.lat >= -90.0 && p.lat <= 90.0;
}

bool is_valid(const Projection& proj) {
  return is_valid(proj.anchor) && std::isfinite(proj.scale) && proj.scale > 0.0;
}

GeoPoint geo_project(const PlanarPoint& p, const Projection& proj) {
  if (!is_valid(proj)) {
    throw Error(ErrorKind::InvalidArgument, "projection needs a valid anchor and scale > 0");
  }
  const GeoPoint g{proj.anchor.lon + p.x * proj.scale, proj.anchor.lat + p.y * proj.scale};
  if (!is_valid(g)) {
    std::ostringstream os;
    os.precision(10);
    os << "planar (" << p.x << ", " << p.y << ") maps to lon " << g.lon << ", lat " << g.lat;
    throw Error(ErrorKind::ProjectionOutOfRange, os.str());
  }
  return g;
}

PlanarPoint geo_unproject(const GeoPoint& g, const Projection& proj) {
  if (!is_valid(proj)) {
    throw Error(ErrorKind::InvalidArgument, "projection needs a valid anchor and scale > 0");
  }
  return {(g.lon - proj.anchor.lon) / proj.scale, (g.lat - proj.anchor.lat) / proj.scale};
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double phi1 = a.lat * kRad;
  const double phi2 = b.lat * kRad;
  const double dphi = (b.lat - a.lat) * kRad;
  const double dlambda = (b.lon - a.lon) * kRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

}  // namespace roadgen
