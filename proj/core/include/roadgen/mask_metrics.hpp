#pragma once

#include "roadgen/raster.hpp"

namespace roadgen {

/// |a AND b| / |a OR b|; 1 when both masks are empty.
/// Throws Error{DimensionMismatch}.
double iou(const BinaryMask& a, const BinaryMask& b);

/// 1 - 2|a AND b| / (|a| + |b|); 0 when both masks are empty.
/// Throws Error{DimensionMismatch}.
double dice_loss(const BinaryMask& a, const BinaryMask& b);

}  // namespace roadgen
