#include "roadgen/extract.hpp"

#include <algorithm>
#include <cmath>

#include "roadgen/error.hpp"

namespace roadgen::extract {

PlanarPoint pixel_to_planar(PlanarPoint pixel, int width, int height) {
  return {pixel.x - width / 2.0, height / 2.0 - pixel.y};
}

Projection image_projection(double m_per_px, GeoPoint anchor) {
  if (!(m_per_px > 0.0) || !std::isfinite(m_per_px)) {
    throw Error(ErrorKind::InvalidArgument, "meters per pixel must be > 0");
  }
  return {anchor, m_per_px / kMetersPerDegree};
}

NetworkGraph extract_network(const BinaryMask& mask, const CornerParams& corner_params,
                             const ConnectParams& connect_params, const Projection& projection, double m_per_px,
                             const RefineParams& refine, ExtractionStages* stages) {
  validate(corner_params);
  validate(connect_params);
  validate(refine);
  if (!(m_per_px > 0.0) || !std::isfinite(m_per_px)) {
    throw Error(ErrorKind::InvalidArgument, "meters per pixel must be > 0");
  }
  if (!is_valid(projection)) throw Error(ErrorKind::InvalidArgument, "invalid projection");

  ExtractionStages local;
  ExtractionStages& st = stages ? *stages : local;

  st.corners = shi_tomasi_corners(mask, corner_params);
  if (st.corners.empty()) throw Error(ErrorKind::NoCornersFound, "mask has no corner features");
  st.located = refine.enabled ? locate_nodes(mask, st.corners, refine) : st.corners;

  st.first_round = connect_points(mask, st.located, connect_params, &st.first_reconstruction);
  st.classes = classify_points(st.first_round);
  st.pruned = prune_redundant(st.first_round, st.classes, connect_params.collinearity_eps);

  if (!refine.enabled) {
    st.second_round = connect_points(mask, st.pruned.points, connect_params, &st.second_reconstruction);
  } else {
    AdjacencyGraph current = st.first_round;
    AdjacencyGraph survivors = st.pruned;
    for (int round = 0; round < std::max(1, refine.rounds); ++round) {
      if (round > 0) {
        survivors = prune_redundant(current, classify_points(current), connect_params.collinearity_eps);
      }
      if (refine.rounds > 0) {
        survivors = merge_close(survivors, refine.merge_radius);
        survivors.points = fit_to_arms(mask, survivors, refine);
      }
      current = connect_points(mask, survivors.points, connect_params, &st.second_reconstruction);
    }
    st.second_round = std::move(current);
  }

  NetworkGraph g;
  g.projection = projection;
  const auto deg = st.second_round.degrees();
  std::vector<NodeId> node_of(st.second_round.points.size(), -1);
  for (std::size_t i = 0; i < st.second_round.points.size(); ++i) {
    if (deg[i] == 0) continue;
    NodeRecord n;
    n.node_id = static_cast<NodeId>(g.nodes.size());
    n.planar = pixel_to_planar(st.second_round.points[i], mask.width(), mask.height());
    n.geo = geo_project(n.planar, projection);
    node_of[i] = n.node_id;
    g.nodes.push_back(n);
  }

  LinkId next = 0;
  for (const auto& [a, b] : st.second_round.edges) {
    const auto& na = g.nodes[static_cast<std::size_t>(node_of[a])];
    const auto& nb = g.nodes[static_cast<std::size_t>(node_of[b])];
    const auto& pa = st.second_round.points[a];
    const auto& pb = st.second_round.points[b];
    const double len = std::hypot(pa.x - pb.x, pa.y - pb.y) * m_per_px;
    g.links.push_back({next++, na.node_id, nb.node_id, len, kDefaultLanes, {na.geo, nb.geo}});
    g.links.push_back({next++, nb.node_id, na.node_id, len, kDefaultLanes, {nb.geo, na.geo}});
  }
  return g;
}

GrayImage corner_overlay(const BinaryMask& mask, const std::vector<PlanarPoint>& corners) {
  GrayImage img(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) img.pixels[i] = mask[i] ? 128 : 0;
  for (const auto& c : corners) {
    const int cx = static_cast<int>(std::lround(c.x));
    const int cy = static_cast<int>(std::lround(c.y));
    for (int d = -3; d <= 3; ++d) {
      if (mask.in_bounds(cx + d, cy)) img.at(cx + d, cy) = 255;
      if (mask.in_bounds(cx, cy + d)) img.at(cx, cy + d) = 255;
    }
  }
  return img;
}

}  // namespace roadgen::extract
