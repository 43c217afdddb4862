#include "roadgen/grid.hpp"

#include <sstream>

#include "roadgen/error.hpp"

namespace roadgen {

NetworkGraph generate_grid(const GridSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    std::ostringstream os;
    os << "grid needs rows >= 1 and cols >= 1, got " << spec.rows << " x " << spec.cols;
    throw Error(ErrorKind::SpecInvalid, os.str());
  }
  if (spec.rows > spec.max_nodes / spec.cols) {
    std::ostringstream os;
    os << spec.rows << " x " << spec.cols << " exceeds the " << spec.max_nodes << "-node limit";
    throw Error(ErrorKind::SpecInvalid, os.str());
  }
  if (!is_valid(spec.projection)) {
    throw Error(ErrorKind::SpecInvalid, "projection needs a valid anchor and scale > 0");
  }

  const std::int64_t n_rows = spec.rows;
  const std::int64_t n_cols = spec.cols;
  NetworkGraph g;
  g.projection = spec.projection;
  g.nodes.reserve(static_cast<std::size_t>(n_rows * n_cols));

  const double x0 = static_cast<double>(n_cols - 1) / 2.0;
  const double y0 = static_cast<double>(n_rows - 1) / 2.0;
  for (std::int64_t i = 0; i < n_rows; ++i) {
    for (std::int64_t j = 0; j < n_cols; ++j) {
      NodeRecord n;
      n.node_id = i * n_cols + j;
      n.planar = {static_cast<double>(j) - x0, static_cast<double>(i) - y0};
      try {
        n.geo = geo_project(n.planar, spec.projection);
      } catch (const Error& e) {
        throw Error(ErrorKind::SpecInvalid, std::string("grid does not fit the globe: ") + e.what());
      }
      g.nodes.push_back(n);
    }
  }

  LinkId next_id = 0;
  auto connect = [&](NodeId a, NodeId b) {
    const auto& na = g.nodes[static_cast<std::size_t>(a)];
    const auto& nb = g.nodes[static_cast<std::size_t>(b)];
    const double len = haversine_m(na.geo, nb.geo);
    g.links.push_back({next_id++, a, b, len, kDefaultLanes, {na.geo, nb.geo}});
    g.links.push_back({next_id++, b, a, len, kDefaultLanes, {nb.geo, na.geo}});
  };
  for (std::int64_t i = 0; i < n_rows; ++i) {
    for (std::int64_t j = 0; j < n_cols; ++j) {
      const NodeId id = i * n_cols + j;
      if (j + 1 < n_cols) connect(id, id + 1);
      if (i + 1 < n_rows) connect(id, id + n_cols);
    }
  }
  return g;
}

}  // namespace roadgen
