#pragma once

#include <vector>

#include "roadgen/geo.hpp"
#include "roadgen/raster.hpp"

namespace roadgen::extract {

struct CornerParams {
  int window = 5;              // odd side of the structure-tensor window
  double quality = 0.01;       // fraction of the strongest response
  double min_distance = 10.0;  // pixels between accepted corners
  int max_corners = 500;
};

/// Throws Error{InvalidArgument} for out-of-range parameters.
void validate(const CornerParams& p);

/// Per-pixel field of doubles, row-major.
struct Field {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct Gradients {
  Field gx;
  Field gy;
};

/// 3x3 Sobel derivatives of the 0/1 mask. Samples outside the image
/// replicate the nearest edge pixel.
Gradients sobel(const BinaryMask& mask);

/// Smaller eigenvalue of the structure tensor [[Sxx, Sxy], [Sxy, Syy]]
/// where each S sums gradient products over the window x window pixels
/// centred on the pixel (pixels outside the image contribute nothing).
/// Evaluated as (t - sqrt(t^2 - 4d)) / 2 with t the trace, d the determinant.
Field min_eigen_response(const BinaryMask& mask, int window);

/// Shi-Tomasi corners: 3x3 local maxima of the response that reach
/// quality * max response, thinned greedily (strongest first, ties by row
/// then column) so no two lie closer than min_distance, at most
/// max_corners. Coordinates are pixel (column, row).
std::vector<PlanarPoint> shi_tomasi_corners(const BinaryMask& mask, const CornerParams& params = {});

}  // namespace roadgen::extract
