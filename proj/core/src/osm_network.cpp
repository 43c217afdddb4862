#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "roadgen/error.hpp"
#include "roadgen/osm.hpp"

namespace roadgen::osm {

namespace {

struct Segment {
  std::vector<OsmId> refs;  // first and last are network nodes
  const Way* way = nullptr;
};

}  // namespace

NetworkGraph osm_to_network(const OsmDocument& doc, const HighwayFilter& filter, const Projection& projection) {
  std::vector<const Way*> kept;
  for (const auto& w : doc.ways) {
    if (filter.accepts(w)) kept.push_back(&w);
  }
  if (kept.empty()) throw Error(ErrorKind::EmptyNetwork, "no ways pass the highway filter");

  // Collapse consecutive repeats ("A A B") that some editors leave behind.
  std::vector<std::vector<OsmId>> refs_of;
  refs_of.reserve(kept.size());
  for (const Way* w : kept) {
    std::vector<OsmId> refs;
    for (OsmId r : w->refs) {
      if (refs.empty() || refs.back() != r) refs.push_back(r);
    }
    refs_of.push_back(std::move(refs));
  }

  std::unordered_map<OsmId, int> uses;
  std::unordered_set<OsmId> junction;
  for (const auto& refs : refs_of) {
    if (refs.size() < 2) continue;
    for (OsmId r : refs) ++uses[r];
    junction.insert(refs.front());
    junction.insert(refs.back());
  }
  for (const auto& [ref, count] : uses) {
    if (count >= 2) junction.insert(ref);
  }

  std::deque<Segment> pending;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto& refs = refs_of[k];
    if (refs.size() < 2) continue;
    Segment seg{{refs.front()}, kept[k]};
    for (std::size_t i = 1; i < refs.size(); ++i) {
      seg.refs.push_back(refs[i]);
      if (junction.contains(refs[i])) {
        pending.push_back(std::move(seg));
        seg = Segment{{refs[i]}, kept[k]};
      }
    }
  }

  // Loops and parallel segments between the same pair of junctions are
  // split at an interior vertex; without one the later duplicate is dropped.
  std::vector<Segment> segments;
  std::set<std::pair<OsmId, OsmId>> used_pairs;
  while (!pending.empty()) {
    Segment seg = std::move(pending.front());
    pending.pop_front();
    const OsmId a = seg.refs.front();
    const OsmId b = seg.refs.back();
    const auto key = std::minmax(a, b);
    if (a != b && !used_pairs.contains(key)) {
      used_pairs.insert(key);
      segments.push_back(std::move(seg));
      continue;
    }
    if (seg.refs.size() < 3) continue;
    const std::size_t mid = seg.refs.size() / 2;
    Segment head{{seg.refs.begin(), seg.refs.begin() + static_cast<std::ptrdiff_t>(mid) + 1}, seg.way};
    Segment tail{{seg.refs.begin() + static_cast<std::ptrdiff_t>(mid), seg.refs.end()}, seg.way};
    pending.push_front(std::move(tail));
    pending.push_front(std::move(head));
  }

  NetworkGraph g;
  g.projection = projection;
  std::unordered_map<OsmId, NodeId> node_of;
  auto node_id = [&](OsmId ref) {
    auto [it, inserted] = node_of.emplace(ref, static_cast<NodeId>(g.nodes.size()));
    if (inserted) {
      NodeRecord n;
      n.node_id = it->second;
      n.geo = doc.nodes.at(ref);
      n.planar = geo_unproject(n.geo, projection);
      g.nodes.push_back(n);
    }
    return it->second;
  };

  LinkId next_link = 0;
  for (const auto& seg : segments) {
    const NodeId from = node_id(seg.refs.front());
    const NodeId to = node_id(seg.refs.back());
    std::vector<GeoPoint> geometry;
    geometry.reserve(seg.refs.size());
    double length = 0.0;
    for (OsmId r : seg.refs) {
      const GeoPoint p = doc.nodes.at(r);
      if (!geometry.empty()) length += haversine_m(geometry.back(), p);
      geometry.push_back(p);
    }
    const int lanes = way_lanes(*seg.way);
    const Direction dir = way_direction(*seg.way);
    if (dir != Direction::Backward) {
      g.links.push_back({next_link++, from, to, length, lanes, geometry});
    }
    if (dir != Direction::Forward) {
      g.links.push_back({next_link++, to, from, length, lanes, {geometry.rbegin(), geometry.rend()}});
    }
  }
  if (g.links.empty()) throw Error(ErrorKind::EmptyNetwork, "kept ways produced no links");
  return g;
}

}  // namespace roadgen::osm
