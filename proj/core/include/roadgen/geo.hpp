#pragma once

namespace roadgen {

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Meters per degree of latitude on the mean-radius sphere (2*pi*R/360).
inline constexpr double kMetersPerDegree = 111'194.92664455873;

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

/// Equirectangular mapping between a planar frame and lon/lat.
///
/// One planar unit equals `scale` degrees on both axes; the planar origin
/// sits on `anchor`. The default anchor is lat 39.125, lon 161.567 with
/// 0.004 degrees per unit.
struct Projection {
  GeoPoint anchor{161.567, 39.125};
  double scale = 0.004;

  friend bool operator==(const Projection&, const Projection&) = default;
};

bool is_valid(const GeoPoint& p);
bool is_valid(const Projection& proj);

/// Throws Error{ProjectionOutOfRange} when the image leaves lon/lat ranges,
/// Error{InvalidArgument} for an invalid projection.
GeoPoint geo_project(const PlanarPoint& p, const Projection& proj);

/// Inverse of geo_project.
PlanarPoint geo_unproject(const GeoPoint& g, const Projection& proj);

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

}  // namespace roadgen
