#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "roadgen/network.hpp"

namespace roadgen::osm {

using OsmId = std::int64_t;

struct Way {
  OsmId id = 0;
  std::vector<OsmId> refs;
  std::map<std::string, std::string> tags;

  /// Empty string when the tag is absent.
  std::string tag(const std::string& key) const;
};

struct OsmDocument {
  std::map<OsmId, GeoPoint> nodes;
  std::vector<Way> ways;
};

/// Parses OSM XML. Only <node> and <way> (with <nd>/<tag> children) are
/// read; relations and metadata are skipped. Ways with fewer than two refs
/// are dropped. Throws Error{XmlMalformed} or Error{DanglingRef}.
OsmDocument parse_osm(std::string_view xml);

struct HighwayFilter {
  std::set<std::string> allowed;

  /// motorway, trunk, primary, secondary, tertiary, residential,
  /// unclassified and the *_link variants.
  static HighwayFilter roads();

  bool accepts(const Way& w) const;
};

enum class Direction { Both, Forward, Backward };

/// Interprets `oneway`: yes/true/1 -> Forward, -1/reverse -> Backward.
Direction way_direction(const Way& w);

/// Lanes from the `lanes` tag (first integer of e.g. "2;3"); 2 otherwise.
int way_lanes(const Way& w);

/// Builds a routable graph from the kept ways. Way endpoints and nodes
/// shared between kept ways become network nodes; everything in between
/// stays as link geometry. Planar coordinates come from `projection`.
/// Throws Error{EmptyNetwork} when no way passes the filter.
NetworkGraph osm_to_network(const OsmDocument& doc, const HighwayFilter& filter,
                            const Projection& projection);

}  // namespace roadgen::osm
