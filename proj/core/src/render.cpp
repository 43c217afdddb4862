#include "roadgen/render.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "roadgen/error.hpp"

namespace roadgen {

void validate(const RenderStyle& s) {
  if (s.width < 1 || s.height < 1) throw Error(ErrorKind::InvalidArgument, "canvas size must be positive");
  if (!(s.node_radius > 0.0) || !(s.stroke_width > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "node radius and stroke width must be positive");
  }
  if (!(s.margin >= 0.0 && s.margin < 0.5)) throw Error(ErrorKind::InvalidArgument, "margin must be in [0, 0.5)");
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

struct Fit {
  double scale = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double half_w = 0.0;
  double half_h = 0.0;

  double x(double px) const { return half_w + (px - cx) * scale; }
  double y(double py) const { return half_h - (py - cy) * scale; }
};

Fit fit_canvas(const NetworkGraph& g, const RenderStyle& s) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& n : g.nodes) {
    min_x = std::min(min_x, n.planar.x);
    max_x = std::max(max_x, n.planar.x);
    min_y = std::min(min_y, n.planar.y);
    max_y = std::max(max_y, n.planar.y);
  }
  Fit f;
  f.cx = (min_x + max_x) / 2.0;
  f.cy = (min_y + max_y) / 2.0;
  f.half_w = s.width / 2.0;
  f.half_h = s.height / 2.0;
  const double usable_w = s.width * (1.0 - 2.0 * s.margin);
  const double usable_h = s.height * (1.0 - 2.0 * s.margin);
  const double dx = max_x - min_x;
  const double dy = max_y - min_y;
  if (dx > 0.0 && dy > 0.0) {
    f.scale = std::min(usable_w / dx, usable_h / dy);
  } else if (dx > 0.0) {
    f.scale = usable_w / dx;
  } else if (dy > 0.0) {
    f.scale = usable_h / dy;
  }
  return f;
}

}  // namespace

std::string render_svg(const NetworkGraph& g, const RenderStyle& style) {
  validate(style);
  if (g.nodes.empty()) throw Error(ErrorKind::EmptyGraph, "graph has no nodes to draw");

  const Fit fit = fit_canvas(g, style);
  std::unordered_map<NodeId, const NodeRecord*> by_id;
  for (const auto& n : g.nodes) by_id.emplace(n.node_id, &n);

  // Undirected pair -> (smallest link id, directions seen).
  struct Stroke {
    LinkId first_id;
    NodeId from;
    NodeId to;
    bool forward = false;
    bool backward = false;
  };
  std::map<std::pair<NodeId, NodeId>, Stroke> strokes;
  for (const auto& l : g.links) {
    const auto key = std::minmax(l.from_node_id, l.to_node_id);
    auto [it, fresh] = strokes.try_emplace(key, Stroke{l.link_id, key.first, key.second});
    Stroke& s = it->second;
    if (!fresh && l.link_id < s.first_id) s.first_id = l.link_id;
    (l.from_node_id == key.first ? s.forward : s.backward) = true;
  }
  std::vector<Stroke> ordered;
  ordered.reserve(strokes.size());
  for (const auto& [key, s] : strokes) ordered.push_back(s);
  std::sort(ordered.begin(), ordered.end(), [](const Stroke& a, const Stroke& b) { return a.first_id < b.first_id; });

  std::vector<const NodeRecord*> nodes;
  nodes.reserve(g.nodes.size());
  for (const auto& n : g.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(), [](auto* a, auto* b) { return a->node_id < b->node_id; });

  const bool any_oneway =
      std::any_of(ordered.begin(), ordered.end(), [](const Stroke& s) { return s.forward != s.backward; });

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
     << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  if (any_oneway) {
    const double a = style.stroke_width * 4.0;
    os << "  <defs>\n"
       << "    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerUnits=\"userSpaceOnUse\""
       << " markerWidth=\"" << num(a) << "\" markerHeight=\"" << num(a) << "\" orient=\"auto\">\n"
       << "      <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#444444\"/>\n"
       << "    </marker>\n"
       << "  </defs>\n";
  }
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  os << "  <g stroke=\"#444444\" stroke-width=\"" << num(style.stroke_width) << "\" stroke-linecap=\"round\">\n";
  for (const auto& s : ordered) {
    const auto fa = by_id.find(s.from);
    const auto fb = by_id.find(s.to);
    if (fa == by_id.end() || fb == by_id.end()) continue;
    const NodeRecord* a = fa->second;
    const NodeRecord* b = fb->second;
    if (s.backward && !s.forward) std::swap(a, b);
    os << "    <line x1=\"" << num(fit.x(a->planar.x)) << "\" y1=\"" << num(fit.y(a->planar.y)) << "\" x2=\""
       << num(fit.x(b->planar.x)) << "\" y2=\"" << num(fit.y(b->planar.y)) << '"';
    if (s.forward != s.backward) os << " marker-end=\"url(#arrow)\"";
    os << "/>\n";
  }
  os << "  </g>\n";
  os << "  <g fill=\"#d62728\">\n";
  for (const auto* n : nodes) {
    os << "    <circle id=\"n" << n->node_id << "\" cx=\"" << num(fit.x(n->planar.x)) << "\" cy=\""
       << num(fit.y(n->planar.y)) << "\" r=\"" << num(style.node_radius) << "\"/>\n";
  }
  os << "  </g>\n";
  os << "</svg>\n";
  return os.str();
}

void write_svg(const NetworkGraph& g, const std::filesystem::path& path, const RenderStyle& style) {
  const std::string text = render_svg(g, style);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
}

}  // namespace roadgen
