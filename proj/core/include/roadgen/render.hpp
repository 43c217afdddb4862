#pragma once

#include <filesystem>
#include <string>

#include "roadgen/network.hpp"

namespace roadgen {

struct RenderStyle {
  int width = 800;
  int height = 800;
  double node_radius = 3.0;
  double stroke_width = 1.5;
  double margin = 0.05;  // fraction of each dimension left blank per side
};

/// Throws Error{InvalidArgument} for non-positive sizes or a margin
/// outside [0, 0.5).
void validate(const RenderStyle& style);

/// SVG drawing of the planar layout, scaled uniformly to fit the canvas
/// and centred, with y pointing up. Links running both ways between two
/// nodes share one line; a link without its reverse gets an arrowhead.
/// Lines are ordered by their smallest link id, circles by node id.
/// Throws Error{EmptyGraph} when there are no nodes.
std::string render_svg(const NetworkGraph& g, const RenderStyle& style = {});

void write_svg(const NetworkGraph& g, const std::filesystem::path& path, const RenderStyle& style = {});

}  // namespace roadgen
