#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roadgen/geo.hpp"

namespace roadgen {

using NodeId = std::int64_t;
using LinkId = std::int64_t;

inline constexpr int kDefaultLanes = 2;

struct NodeRecord {
  NodeId node_id = 0;
  PlanarPoint planar;
  GeoPoint geo;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct LinkRecord {
  LinkId link_id = 0;
  NodeId from_node_id = 0;
  NodeId to_node_id = 0;
  double length_m = 0.0;
  int lanes = kDefaultLanes;
  std::vector<GeoPoint> geometry;

  friend bool operator==(const LinkRecord&, const LinkRecord&) = default;
};

/// Directed road network in a planar frame tied to lon/lat by `projection`.
struct NetworkGraph {
  std::vector<NodeRecord> nodes;
  std::vector<LinkRecord> links;
  Projection projection;

  bool empty() const { return nodes.empty(); }
  const NodeRecord* find_node(NodeId id) const;
};

enum class ViolationKind {
  DuplicateId,
  DanglingEndpoint,
  SelfLoop,
  DuplicateLinkPair,
  BadLanes,
  BadLength,
  BadGeometry,
  GeoInconsistent,
  InvalidCoordinate,
  InvalidProjection,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
  std::string summary() const;
};

/// Tolerance, in degrees, for node geo vs projected planar and for
/// link geometry endpoints vs node positions.
inline constexpr double kGeoToleranceDeg = 1e-9;

ValidationReport validate_graph(const NetworkGraph& g);

std::string_view to_string(ViolationKind kind);

}  // namespace roadgen
