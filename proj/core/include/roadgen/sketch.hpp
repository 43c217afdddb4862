#pragma once

#include "roadgen/raster.hpp"

namespace roadgen::sketch {

inline constexpr int kTargetMaxDimension = 512;

/// Rescales so the longer side equals `max_dim`, keeping aspect. Shrinking
/// averages covered source area; enlarging interpolates bilinearly.
GrayImage resize_to_max_dimension(const GrayImage& img, int max_dim = kTargetMaxDimension);

/// 3x3 median with edge replication.
GrayImage median3x3(const GrayImage& img);

/// Otsu's threshold t: pixels <= t form the dark class. Returns -1 for a
/// single-valued image (nothing to separate).
int otsu_threshold(const GrayImage& img);

/// Binary closing with a 3x3 square, one iteration. Out-of-image
/// neighbours do not erode border strokes.
BinaryMask close3x3(const BinaryMask& mask);

/// Hand-drawn sketch to road mask: resize, median denoise, Otsu threshold
/// with the minority class taken as strokes, then closing to bridge small
/// gaps. Throws Error{ImageEmpty}.
BinaryMask preprocess_sketch(const GrayImage& image);

}  // namespace roadgen::sketch
