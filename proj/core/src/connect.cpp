#include "roadgen/connect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "roadgen/error.hpp"

namespace roadgen::extract {

void validate(const ConnectParams& p) {
  if (p.thickness < 0) throw Error(ErrorKind::InvalidArgument, "thickness must be >= 0");
  if (!(p.collinearity_eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "collinearity_eps must be > 0");
  if (p.canvas_margin < 0) throw Error(ErrorKind::InvalidArgument, "canvas_margin must be >= 0");
}

namespace {

struct Pixel {
  int x;
  int y;
};

Pixel round_point(PlanarPoint p) {
  return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
}

/// Marks visited pixels with a generation counter so each footprint pixel
/// is reported once without sorting.
class Stamper {
 public:
  Stamper(int width, int height) : width_(width), height_(height), marks_(static_cast<std::size_t>(width) * height, 0) {}

  template <typename Fn>
  void footprint(Pixel a, Pixel b, int t, Fn&& fn) {
    if (++generation_ == 0) {
      std::fill(marks_.begin(), marks_.end(), 0);
      generation_ = 1;
    }
    auto stamp = [&](int cx, int cy) {
      for (int y = std::max(0, cy - t); y <= std::min(height_ - 1, cy + t); ++y) {
        for (int x = std::max(0, cx - t); x <= std::min(width_ - 1, cx + t); ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
          if (marks_[i] != generation_) {
            marks_[i] = generation_;
            fn(i);
          }
        }
      }
    };
    // Bresenham, all octants.
    int x = a.x;
    int y = a.y;
    const int dx = std::abs(b.x - a.x);
    const int dy = -std::abs(b.y - a.y);
    const int sx = a.x < b.x ? 1 : -1;
    const int sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    while (true) {
      stamp(x, y);
      if (x == b.x && y == b.y) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

 private:
  int width_;
  int height_;
  std::uint32_t generation_ = 0;
  std::vector<std::uint32_t> marks_;
};

void check_point(const BinaryMask& m, PlanarPoint p) {
  const Pixel px = round_point(p);
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !m.in_bounds(px.x, px.y)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ") outside " << m.width() << "x" << m.height();
    throw Error(ErrorKind::OutOfBounds, os.str());
  }
}

std::int64_t gain_with(Stamper& stamper, const BinaryMask& mask, const BinaryMask& canvas, Pixel a, Pixel b,
                       int thickness) {
  std::int64_t delta = 0;
  stamper.footprint(a, b, thickness, [&](std::size_t i) {
    if (!canvas[i]) delta += mask[i] ? -1 : 1;
  });
  return delta;
}

void draw_with(Stamper& stamper, BinaryMask& canvas, Pixel a, Pixel b, int thickness) {
  stamper.footprint(a, b, thickness, [&](std::size_t i) { canvas.set_index(i, true); });
}

double dist(PlanarPoint a, PlanarPoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::vector<std::size_t> segment_footprint(int width, int height, PlanarPoint p, PlanarPoint q, int thickness) {
  if (width < 1 || height < 1) throw Error(ErrorKind::InvalidArgument, "empty raster");
  Stamper stamper(width, height);
  std::vector<std::size_t> out;
  stamper.footprint(round_point(p), round_point(q), std::max(0, thickness), [&](std::size_t i) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t segment_gain(const BinaryMask& mask, const BinaryMask& canvas, PlanarPoint p, PlanarPoint q,
                          int thickness) {
  if (mask.width() != canvas.width() || mask.height() != canvas.height()) {
    throw Error(ErrorKind::DimensionMismatch, "mask and canvas differ in size");
  }
  check_point(mask, p);
  check_point(mask, q);
  if (p == q) throw Error(ErrorKind::InvalidArgument, "segment endpoints coincide");
  if (thickness < 0) throw Error(ErrorKind::InvalidArgument, "thickness must be >= 0");
  Stamper stamper(mask.width(), mask.height());
  return gain_with(stamper, mask, canvas, round_point(p), round_point(q), thickness);
}

void draw_segment(BinaryMask& canvas, PlanarPoint p, PlanarPoint q, int thickness) {
  check_point(canvas, p);
  check_point(canvas, q);
  Stamper stamper(canvas.width(), canvas.height());
  draw_with(stamper, canvas, round_point(p), round_point(q), std::max(0, thickness));
}

void AdjacencyGraph::add_edge(std::size_t a, std::size_t b) {
  if (a == b) return;
  edges.emplace(std::min(a, b), std::max(a, b));
}

bool AdjacencyGraph::has_edge(std::size_t a, std::size_t b) const {
  return edges.contains({std::min(a, b), std::max(a, b)});
}

std::vector<std::size_t> AdjacencyGraph::degrees() const {
  std::vector<std::size_t> deg(points.size(), 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

std::vector<std::vector<std::size_t>> AdjacencyGraph::neighbours() const {
  std::vector<std::vector<std::size_t>> nb(points.size());
  for (const auto& [a, b] : edges) {
    nb[a].push_back(b);
    nb[b].push_back(a);
  }
  return nb;
}

AdjacencyGraph connect_points(const BinaryMask& mask, const std::vector<PlanarPoint>& points,
                              const ConnectParams& params, BinaryMask* reconstruction) {
  validate(params);
  for (const auto& p : points) check_point(mask, p);

  AdjacencyGraph adj;
  adj.points = points;
  BinaryMask canvas(mask.width(), mask.height());

  const double limit = params.max_pair_distance > 0.0 ? params.max_pair_distance
                                                      : std::hypot(mask.width(), mask.height());
  struct Pair {
    double d;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = dist(points[i], points[j]);
      if (d > 0.0 && d <= limit) pairs.push_back({d, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return std::tie(a.d, a.i, a.j) < std::tie(b.d, b.i, b.j); });

  Stamper stamper(mask.width(), mask.height());
  for (const auto& pr : pairs) {
    const Pixel a = round_point(points[pr.i]);
    const Pixel b = round_point(points[pr.j]);
    if (a.x == b.x && a.y == b.y) continue;
    if (gain_with(stamper, mask, canvas, a, b, params.thickness) < 0) {
      draw_with(stamper, canvas, a, b, params.thickness + params.canvas_margin);
      adj.add_edge(pr.i, pr.j);
    }
  }
  if (reconstruction) *reconstruction = std::move(canvas);
  return adj;
}

std::vector<PointClass> classify_points(const AdjacencyGraph& adj) {
  const auto deg = adj.degrees();
  std::vector<PointClass> out;
  out.reserve(adj.points.size());
  for (std::size_t i = 0; i < adj.points.size(); ++i) {
    out.push_back({adj.points[i], deg[i], deg[i] == 2 ? PointKind::NonImportant : PointKind::Important});
  }
  return out;
}

AdjacencyGraph prune_redundant(const AdjacencyGraph& adj, const std::vector<PointClass>& classes, double eps) {
  if (classes.size() != adj.points.size()) {
    throw Error(ErrorKind::InvalidArgument, "classes and points differ in length");
  }
  const auto deg = adj.degrees();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if ((classes[i].kind == PointKind::NonImportant) != (deg[i] == 2)) {
      throw Error(ErrorKind::InvalidArgument, "classes disagree with point degrees");
    }
  }

  const std::size_t n = adj.points.size();
  std::vector<std::set<std::size_t>> nb(n);
  for (const auto& [a, b] : adj.edges) {
    nb[a].insert(b);
    nb[b].insert(a);
  }
  std::vector<bool> alive(n, true);

  auto excess = [&](std::size_t r) {
    const auto& P = adj.points[*nb[r].begin()];
    const auto& Q = adj.points[*std::next(nb[r].begin())];
    const auto& R = adj.points[r];
    return dist(P, R) + dist(R, Q) - dist(P, Q);
  };

  // Best first: the straightest candidate goes each time, so points along
  // a stroke vanish before a genuine bend is judged against its far
  // neighbours.
  while (true) {
    std::size_t pick = n;
    double best = eps;
    for (std::size_t r = 0; r < n; ++r) {
      if (!alive[r] || classes[r].kind != PointKind::NonImportant || nb[r].size() != 2) continue;
      const double e = excess(r);
      if (e < best) {
        best = e;
        pick = r;
      }
    }
    if (pick == n) break;
    const std::size_t p = *nb[pick].begin();
    const std::size_t q = *std::next(nb[pick].begin());
    alive[pick] = false;
    nb[p].erase(pick);
    nb[q].erase(pick);
    nb[pick].clear();
    nb[p].insert(q);
    nb[q].insert(p);
  }

  std::vector<std::size_t> new_index(n, 0);
  AdjacencyGraph out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    new_index[i] = out.points.size();
    out.points.push_back(adj.points[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    for (std::size_t j : nb[i]) {
      if (i < j) out.add_edge(new_index[i], new_index[j]);
    }
  }
  return out;
}

}  // namespace roadgen::extract
