#pragma once

#include <cstdint>

#include "roadgen/network.hpp"

namespace roadgen {

inline constexpr std::int64_t kDefaultMaxGridNodes = 10'000;

/// An N x M lattice with unit spacing, centered on the projection anchor.
struct GridSpec {
  std::int64_t rows = 1;
  std::int64_t cols = 1;
  Projection projection;
  std::int64_t max_nodes = kDefaultMaxGridNodes;
};

/// Row i maps to planar y = i - (rows-1)/2, column j to x = j - (cols-1)/2.
/// Node ids are i*cols + j. Each 4-neighbour adjacency becomes two directed
/// links with 2 lanes and haversine length. Throws Error{SpecInvalid}.
NetworkGraph generate_grid(const GridSpec& spec);

}  // namespace roadgen
