#pragma once

#include <vector>

#include "roadgen/connect.hpp"
#include "roadgen/geo.hpp"
#include "roadgen/raster.hpp"

namespace roadgen::extract {

/// Node placement between connection rounds. Corner peaks on thick strokes
/// sit on the stroke boundary, and at acute junctions several pixels away
/// from where the centre lines meet; these steps move points onto the
/// centre lines before segments are tested.
struct RefineParams {
  bool enabled = true;
  double inner_radius = 9.0;    // pixels, first sampling circle
  double outer_radius = 16.0;   // pixels, second sampling circle
  double max_arc = 6.0;         // longest circle crossing still read as one road
  double max_move = 10.0;       // cap on displacement by locate_nodes
  double merge_radius = 9.0;    // points closer than this become one node
  int rounds = 3;               // prune, merge, fit, reconnect passes
  double fit_max_move = 8.0;    // cap on displacement per fit_to_arms pass
  double profile_reach = 5.0;   // pixels either side of a segment searched for the stroke
};

/// Throws Error{InvalidArgument} for out-of-range values.
void validate(const RefineParams& p);

/// Where a circle of `radius` around `centre` crosses the mask: the midpoint
/// of each run of road samples and the run length in pixels, in angular
/// order starting from +x. A circle lying entirely on road yields nothing.
struct CircleCrossing {
  double angle;
  PlanarPoint point;
  double length;
};
std::vector<CircleCrossing> circle_crossings(const BinaryMask& mask, PlanarPoint centre, double radius);

/// Moves each point to the least-squares meeting point of the road centre
/// lines around it. Each road leaving the point is found as a crossing on
/// the inner circle paired with the nearest-angle crossing on the outer
/// circle; the line through the two is its centre line. One line
/// (an endpoint or a straight run) projects the point onto it. The estimate
/// is repeated up to three times from the new position; a point whose
/// estimate would leave max_move of the start, or that sees no road,
/// stays where it is.
std::vector<PlanarPoint> locate_nodes(const BinaryMask& mask, const std::vector<PlanarPoint>& points,
                                      const RefineParams& params = {});

/// Collapses clusters of points linked by gaps below `radius` into their
/// centroid and remaps edges, dropping the ones that become self loops.
/// Clusters are numbered by their first member.
AdjacencyGraph merge_close(const AdjacencyGraph& g, double radius);

/// For every point with two or more neighbours, fits a centre line to each
/// incident segment from the stroke profile along it (skipping the ends)
/// and moves the point to where those lines meet. Moves longer than
/// fit_max_move or out of the image are discarded.
std::vector<PlanarPoint> fit_to_arms(const BinaryMask& mask, const AdjacencyGraph& g,
                                     const RefineParams& params = {});

}  // namespace roadgen::extract
