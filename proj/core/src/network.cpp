#include "roadgen/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace roadgen {

const NodeRecord* NetworkGraph::find_node(NodeId id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(),
                         [id](const NodeRecord& n) { return n.node_id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << to_string(v.kind) << ": " << v.detail << '\n';
  }
  return os.str();
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateId: return "DuplicateId";
    case ViolationKind::DanglingEndpoint: return "DanglingEndpoint";
    case ViolationKind::SelfLoop: return "SelfLoop";
    case ViolationKind::DuplicateLinkPair: return "DuplicateLinkPair";
    case ViolationKind::BadLanes: return "BadLanes";
    case ViolationKind::BadLength: return "BadLength";
    case ViolationKind::BadGeometry: return "BadGeometry";
    case ViolationKind::GeoInconsistent: return "GeoInconsistent";
    case ViolationKind::InvalidCoordinate: return "InvalidCoordinate";
    case ViolationKind::InvalidProjection: return "InvalidProjection";
  }
  return "Unknown";
}

namespace {

bool near(const GeoPoint& a, const GeoPoint& b) {
  return std::abs(a.lon - b.lon) <= kGeoToleranceDeg && std::abs(a.lat - b.lat) <= kGeoToleranceDeg;
}

}  // namespace

ValidationReport validate_graph(const NetworkGraph& g) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    report.violations.push_back({kind, os.str()});
  };

  const bool proj_ok = is_valid(g.projection);
  if (!proj_ok) add(ViolationKind::InvalidProjection, "anchor or scale invalid");

  std::unordered_map<NodeId, const NodeRecord*> by_id;
  for (const auto& n : g.nodes) {
    if (n.node_id < 0) add(ViolationKind::DuplicateId, "node id ", n.node_id, " is negative");
    if (!by_id.emplace(n.node_id, &n).second) {
      add(ViolationKind::DuplicateId, "node id ", n.node_id, " repeated");
    }
    if (!std::isfinite(n.planar.x) || !std::isfinite(n.planar.y) || !is_valid(n.geo)) {
      add(ViolationKind::InvalidCoordinate, "node ", n.node_id);
      continue;
    }
    if (proj_ok) {
      const GeoPoint expected{g.projection.anchor.lon + n.planar.x * g.projection.scale,
                              g.projection.anchor.lat + n.planar.y * g.projection.scale};
      if (!near(expected, n.geo)) {
        add(ViolationKind::GeoInconsistent, "node ", n.node_id, " geo disagrees with planar");
      }
    }
  }

  std::unordered_set<LinkId> link_ids;
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& l : g.links) {
    if (l.link_id < 0) add(ViolationKind::DuplicateId, "link id ", l.link_id, " is negative");
    if (!link_ids.insert(l.link_id).second) {
      add(ViolationKind::DuplicateId, "link id ", l.link_id, " repeated");
    }
    if (l.from_node_id == l.to_node_id) {
      add(ViolationKind::SelfLoop, "link ", l.link_id, " starts and ends at ", l.from_node_id);
    }
    if (!pairs.emplace(l.from_node_id, l.to_node_id).second) {
      add(ViolationKind::DuplicateLinkPair, "link ", l.link_id, " repeats (", l.from_node_id, ",",
          l.to_node_id, ")");
    }
    if (l.lanes < 1) add(ViolationKind::BadLanes, "link ", l.link_id, " has ", l.lanes, " lanes");
    if (!std::isfinite(l.length_m) || l.length_m < 0.0) {
      add(ViolationKind::BadLength, "link ", l.link_id);
    }

    const auto from = by_id.find(l.from_node_id);
    const auto to = by_id.find(l.to_node_id);
    if (from == by_id.end()) {
      add(ViolationKind::DanglingEndpoint, "link ", l.link_id, " from node ", l.from_node_id);
    }
    if (to == by_id.end()) {
      add(ViolationKind::DanglingEndpoint, "link ", l.link_id, " to node ", l.to_node_id);
    }

    if (l.geometry.size() < 2) {
      add(ViolationKind::BadGeometry, "link ", l.link_id, " has ", l.geometry.size(), " vertices");
      continue;
    }
    if (!std::all_of(l.geometry.begin(), l.geometry.end(),
                     [](const GeoPoint& p) { return is_valid(p); })) {
      add(ViolationKind::InvalidCoordinate, "link ", l.link_id, " geometry");
      continue;
    }
    if (from != by_id.end() && !near(l.geometry.front(), from->second->geo)) {
      add(ViolationKind::BadGeometry, "link ", l.link_id, " geometry does not start at from node");
    }
    if (to != by_id.end() && !near(l.geometry.back(), to->second->geo)) {
      add(ViolationKind::BadGeometry, "link ", l.link_id, " geometry does not end at to node");
    }
  }
  return report;
}

}  // namespace roadgen
