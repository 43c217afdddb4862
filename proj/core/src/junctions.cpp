#include "roadgen/junctions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include "roadgen/error.hpp"

namespace roadgen::extract {

void validate(const RefineParams& p) {
  if (!(p.inner_radius > 0.0) || !(p.outer_radius > p.inner_radius)) {
    throw Error(ErrorKind::InvalidArgument, "refine radii must satisfy 0 < inner < outer");
  }
  if (!(p.max_arc > 0.0)) throw Error(ErrorKind::InvalidArgument, "max_arc must be > 0");
  if (!(p.max_move >= 0.0) || !(p.fit_max_move >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "move caps must be >= 0");
  }
  if (!(p.merge_radius >= 0.0)) throw Error(ErrorKind::InvalidArgument, "merge_radius must be >= 0");
  if (p.rounds < 0) throw Error(ErrorKind::InvalidArgument, "rounds must be >= 0");
  if (!(p.profile_reach > 0.0)) throw Error(ErrorKind::InvalidArgument, "profile_reach must be > 0");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool road(const BinaryMask& m, double x, double y) {
  const int ix = static_cast<int>(std::lround(x));
  const int iy = static_cast<int>(std::lround(y));
  return m.in_bounds(ix, iy) && m.at(ix, iy);
}

double angle_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

/// Line through `point` with unit direction (dx, dy).
struct Line {
  PlanarPoint point;
  double dx;
  double dy;
};

/// Least-squares point closest to all lines, pulled weakly towards `prior`
/// so parallel lines still give a unique answer.
PlanarPoint meet(const std::vector<Line>& lines, PlanarPoint prior, double pull) {
  double a = pull;
  double b = 0.0;
  double c = pull;
  double rx = pull * prior.x;
  double ry = pull * prior.y;
  for (const auto& l : lines) {
    const double nx = -l.dy;
    const double ny = l.dx;
    const double d = nx * l.point.x + ny * l.point.y;
    a += nx * nx;
    b += nx * ny;
    c += ny * ny;
    rx += nx * d;
    ry += ny * d;
  }
  const double det = a * c - b * b;
  return {(c * rx - b * ry) / det, (a * ry - b * rx) / det};
}

double distance(PlanarPoint a, PlanarPoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::vector<CircleCrossing> circle_crossings(const BinaryMask& mask, PlanarPoint centre, double radius) {
  const int n = std::max(16, static_cast<int>(std::ceil(2.0 * kTwoPi * radius)));
  std::vector<bool> on(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = kTwoPi * k / n;
    on[static_cast<std::size_t>(k)] = road(mask, centre.x + radius * std::cos(a), centre.y + radius * std::sin(a));
  }
  const auto gap = std::find(on.begin(), on.end(), false);
  if (gap == on.end()) return {};
  const int start = static_cast<int>(gap - on.begin());
  const double step = kTwoPi * radius / n;

  std::vector<CircleCrossing> out;
  int i = 1;
  while (i <= n) {
    if (!on[static_cast<std::size_t>((start + i) % n)]) {
      ++i;
      continue;
    }
    int j = i;
    while (j <= n && on[static_cast<std::size_t>((start + j) % n)]) ++j;
    const double mid = start + (i + j - 1) / 2.0;
    const double a = std::fmod(kTwoPi * mid / n, kTwoPi);
    out.push_back({a, {centre.x + radius * std::cos(a), centre.y + radius * std::sin(a)}, (j - i) * step});
    i = j;
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.angle < r.angle; });
  return out;
}

std::vector<PlanarPoint> locate_nodes(const BinaryMask& mask, const std::vector<PlanarPoint>& points,
                                      const RefineParams& params) {
  validate(params);
  std::vector<PlanarPoint> out;
  out.reserve(points.size());
  for (const auto& start : points) {
    PlanarPoint at = start;
    for (int pass = 0; pass < 3; ++pass) {
      const auto inner = circle_crossings(mask, at, params.inner_radius);
      const auto outer = circle_crossings(mask, at, params.outer_radius);
      std::vector<Line> arms;
      for (const auto& c : inner) {
        if (c.length > params.max_arc) continue;
        const CircleCrossing* partner = nullptr;
        double best = 0.5;  // radians
        for (const auto& o : outer) {
          if (o.length > params.max_arc) continue;
          const double g = angle_gap(c.angle, o.angle);
          if (g < best) {
            best = g;
            partner = &o;
          }
        }
        if (!partner) continue;
        const double len = distance(c.point, partner->point);
        if (len <= 0.0) continue;
        arms.push_back({c.point, (partner->point.x - c.point.x) / len, (partner->point.y - c.point.y) / len});
      }
      if (arms.empty()) break;
      const PlanarPoint next = meet(arms, at, 0.02);
      if (!std::isfinite(next.x) || !std::isfinite(next.y) || distance(next, start) > params.max_move) break;
      const bool settled = distance(next, at) < 0.05;
      at = next;
      if (settled) break;
    }
    out.push_back(at);
  }
  return out;
}

AdjacencyGraph merge_close(const AdjacencyGraph& g, double radius) {
  const std::size_t n = g.points.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance(g.points[i], g.points[j]) >= radius) continue;
      const std::size_t a = find(i);
      const std::size_t b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  AdjacencyGraph out;
  std::vector<std::optional<std::size_t>> slot(n);
  std::vector<double> count;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (!slot[root]) {
      slot[root] = out.points.size();
      out.points.push_back({0.0, 0.0});
      count.push_back(0.0);
    }
    const std::size_t k = *slot[root];
    out.points[k].x += g.points[i].x;
    out.points[k].y += g.points[i].y;
    count[k] += 1.0;
  }
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    out.points[k].x /= count[k];
    out.points[k].y /= count[k];
  }
  for (const auto& [a, b] : g.edges) out.add_edge(*slot[find(a)], *slot[find(b)]);
  return out;
}

namespace {

/// Centre of the road run across the normal through (x, y) that lies
/// nearest to it, searched within +-reach at half-pixel steps.
std::optional<PlanarPoint> profile_centre(const BinaryMask& mask, PlanarPoint at, double nx, double ny, double reach) {
  const int half = static_cast<int>(std::ceil(reach * 2.0));
  std::optional<double> best;
  int k = -half;
  while (k <= half) {
    if (!road(mask, at.x + 0.5 * k * nx, at.y + 0.5 * k * ny)) {
      ++k;
      continue;
    }
    int j = k;
    while (j <= half && road(mask, at.x + 0.5 * j * nx, at.y + 0.5 * j * ny)) ++j;
    const double c = 0.5 * (k + j - 1) / 2.0;
    if (!best || std::abs(c) < std::abs(*best)) best = c;
    k = j;
  }
  if (!best) return std::nullopt;
  return PlanarPoint{at.x + *best * nx, at.y + *best * ny};
}

std::optional<Line> fit_segment(const BinaryMask& mask, PlanarPoint from, PlanarPoint to, double reach) {
  const double len = distance(from, to);
  if (len < 8.0) return std::nullopt;
  const double ux = (to.x - from.x) / len;
  const double uy = (to.y - from.y) / len;
  const double skip = std::min(10.0, len / 3.0);
  const double stop = std::min(len - skip, 45.0);
  std::vector<PlanarPoint> samples;
  for (double s = skip; s <= stop; s += 1.0) {
    if (auto c = profile_centre(mask, {from.x + s * ux, from.y + s * uy}, -uy, ux, reach)) samples.push_back(*c);
  }
  if (samples.size() < 4) return std::nullopt;

  // Total least squares: principal axis of the samples.
  double mx = 0.0, my = 0.0;
  for (const auto& p : samples) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(samples.size());
  my /= static_cast<double>(samples.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : samples) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
    syy += (p.y - my) * (p.y - my);
  }
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  return Line{{mx, my}, std::cos(theta), std::sin(theta)};
}

}  // namespace

std::vector<PlanarPoint> fit_to_arms(const BinaryMask& mask, const AdjacencyGraph& g, const RefineParams& params) {
  validate(params);
  const auto nb = g.neighbours();
  std::vector<PlanarPoint> out = g.points;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    if (nb[i].size() < 2) continue;
    const PlanarPoint at = g.points[i];
    std::vector<Line> arms;
    for (std::size_t j : nb[i]) {
      if (auto l = fit_segment(mask, at, g.points[j], params.profile_reach)) arms.push_back(*l);
    }
    if (arms.size() < 2) continue;
    const PlanarPoint next = meet(arms, at, 0.05);
    if (!std::isfinite(next.x) || !std::isfinite(next.y)) continue;
    if (distance(next, at) > params.fit_max_move) continue;
    if (!mask.in_bounds(static_cast<int>(std::lround(next.x)), static_cast<int>(std::lround(next.y)))) continue;
    out[i] = next;
  }
  return out;
}

}  // namespace roadgen::extract
