#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "roadgen/geo.hpp"
#include "roadgen/raster.hpp"

namespace roadgen::extract {

struct ConnectParams {
  int thickness = 1;               // half-width: 1 draws a 3-px stroke
  double collinearity_eps = 2.0;   // pixels
  double max_pair_distance = 0.0;  // <= 0 means the image diagonal
  int canvas_margin = 1;           // extra half-width when drawing accepted segments
};

void validate(const ConnectParams& p);

/// Linear pixel indices covered by the Bresenham line between the rounded
/// endpoints, dilated by a (2*thickness+1)^2 square and clipped to the
/// image. Sorted, no duplicates.
std::vector<std::size_t> segment_footprint(int width, int height, PlanarPoint p, PlanarPoint q, int thickness);

/// Change in the summed squared error between `canvas` and `mask` if the
/// segment p-q were drawn onto the canvas: over pixels the segment newly
/// sets, (#mask==0) - (#mask==1). Negative exactly when the whole-image
/// MSE decreases. Throws Error{OutOfBounds} for endpoints outside the
/// image, Error{DimensionMismatch} for differently-sized rasters and
/// Error{InvalidArgument} when p == q.
std::int64_t segment_gain(const BinaryMask& mask, const BinaryMask& canvas, PlanarPoint p, PlanarPoint q,
                          int thickness);

void draw_segment(BinaryMask& canvas, PlanarPoint p, PlanarPoint q, int thickness);

struct AdjacencyGraph {
  std::vector<PlanarPoint> points;
  std::set<std::pair<std::size_t, std::size_t>> edges;  // (i, j) with i < j

  void add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;
  std::vector<std::size_t> degrees() const;
  std::vector<std::vector<std::size_t>> neighbours() const;
};

/// Greedy line validation. Candidate pairs closer than max_pair_distance
/// are visited by ascending length (ties by index); a pair is accepted
/// when its segment_gain against the running reconstruction is negative,
/// and is then drawn onto that reconstruction at thickness + canvas_margin.
/// The wider drawing claims the whole width of a road that is thicker than
/// the test stroke, so a near-parallel chord between two points already
/// joined finds nothing new to explain.
AdjacencyGraph connect_points(const BinaryMask& mask, const std::vector<PlanarPoint>& points,
                              const ConnectParams& params = {}, BinaryMask* reconstruction = nullptr);

enum class PointKind { Important, NonImportant };

struct PointClass {
  PlanarPoint point;
  std::size_t degree = 0;
  PointKind kind = PointKind::Important;
};

/// Degree 2 => NonImportant; every other degree (0, 1, >= 3) => Important.
std::vector<PointClass> classify_points(const AdjacencyGraph& adj);

/// Removes NonImportant points whose two neighbours p, q satisfy
/// |pr| + |rq| - |pq| < eps, joining p-q instead, until nothing changes.
/// The candidate with the smallest excess is removed first (ties by
/// index). Only points classified NonImportant on entry are candidates.
/// Survivors keep their relative order.
AdjacencyGraph prune_redundant(const AdjacencyGraph& adj, const std::vector<PointClass>& classes, double eps);

}  // namespace roadgen::extract
