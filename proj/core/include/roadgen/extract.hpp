#pragma once

#include <vector>

#include "roadgen/connect.hpp"
#include "roadgen/corners.hpp"
#include "roadgen/junctions.hpp"
#include "roadgen/network.hpp"
#include "roadgen/raster.hpp"

namespace roadgen::extract {

/// Intermediate products, for debugging dumps and tests.
struct ExtractionStages {
  std::vector<PlanarPoint> corners;
  std::vector<PlanarPoint> located;  // corners after locate_nodes
  AdjacencyGraph first_round;
  BinaryMask first_reconstruction;
  std::vector<PointClass> classes;
  AdjacencyGraph pruned;
  AdjacencyGraph second_round;  // the last connection round
  BinaryMask second_reconstruction;
};

/// Pixel (column, row) to the network's planar frame: origin at the image
/// centre, y pointing up.
PlanarPoint pixel_to_planar(PlanarPoint pixel, int width, int height);

/// Projection whose scale makes one pixel span `m_per_px` meters north-south.
Projection image_projection(double m_per_px, GeoPoint anchor = Projection{}.anchor);

/// Mask to road network: corners, first connection round, degree
/// classification, collinear pruning, then a second connection round over
/// the survivors on a fresh canvas. Points left without any connection are
/// dropped. Every edge becomes two directed links of length
/// pixel_length * m_per_px.
///
/// With refine.enabled the corners first go through locate_nodes, and the
/// prune/reconnect step runs refine.rounds times; before each reconnection
/// the survivors are merged (merge_close) and re-placed (fit_to_arms).
/// Without it the plain two-round pipeline runs.
/// Throws Error{NoCornersFound} when the detector finds nothing.
NetworkGraph extract_network(const BinaryMask& mask, const CornerParams& corners, const ConnectParams& connect,
                             const Projection& projection, double m_per_px = 1.0, const RefineParams& refine = {},
                             ExtractionStages* stages = nullptr);

/// Grayscale overlay of the mask (128) with corners marked as white crosses.
GrayImage corner_overlay(const BinaryMask& mask, const std::vector<PlanarPoint>& corners);

}  // namespace roadgen::extract
