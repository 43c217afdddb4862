#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roadgen/extract.hpp"
#include "roadgen/geocode.hpp"
#include "roadgen/grid.hpp"
#include "roadgen/osm.hpp"
#include "roadgen/osm_fetch.hpp"
#include "roadgen/render.hpp"
#include "roadgen/router.hpp"
#include "roadgen/sumo.hpp"

namespace roadgen::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kSvgFile = "network.svg";
inline constexpr const char* kRawOsmFile = "map.osm";

/// Files a pipeline wrote, absolute, in a fixed order: Node.csv, Link.csv,
/// the SVG, then anything else (raw OSM, stage dumps).
struct Outputs {
  std::vector<fs::path> files;
  NetworkGraph graph;
};

/// One path per line, each followed by a newline.
std::string paths_text(const Outputs& out);

/// GMNS pair plus SVG for an already-built graph.
Outputs emit_network(const NetworkGraph& g, const fs::path& out_dir, const RenderStyle& style = {});

Outputs build_grid(const GridSpec& spec, const fs::path& out_dir, const RenderStyle& style = {});

struct PlaceOptions {
  double radius_m = osm::kDefaultSearchRadiusM;
  osm::FetchOptions fetch;
  osm::HighwayFilter filter = osm::HighwayFilter::roads();
  /// Read this OSM XML file instead of downloading. The anchor is then the
  /// geocoded place when a geocoder is given, else the centre of the
  /// file's node extent.
  std::optional<fs::path> osm_file;
};

/// Place name to network: geocode, fetch the surrounding box, parse,
/// convert. The planar frame is metres around the geocoded point. The raw
/// download is kept beside the outputs as map.osm.
Outputs build_place(const std::string& name, osm::GeocoderInterface* geocoder, const fs::path& out_dir,
                    const PlaceOptions& options = {});

struct ImageOptions {
  extract::CornerParams corners;
  extract::ConnectParams connect;
  extract::RefineParams refine;
  double m_per_px = 1.0;
  GeoPoint anchor = Projection{}.anchor;
  /// When set, writes mask.png, corners.png and first_round.png there.
  std::optional<fs::path> dump_stages;
};

/// Road mask image (pixel >= 128 is road) to network.
Outputs build_from_mask(const fs::path& mask_path, const fs::path& out_dir, const ImageOptions& options = {});

/// Hand-drawn sketch to network: preprocess_sketch, then as for masks.
Outputs build_from_sketch(const fs::path& image_path, const fs::path& out_dir,
                          const ImageOptions& options = {});

Outputs extract_to_files(const BinaryMask& mask, const fs::path& out_dir, const ImageOptions& options);

/// SVG for a GMNS directory holding Node.csv and Link.csv.
fs::path render_gmns_dir(const fs::path& gmns_dir, const fs::path& svg_path, const RenderStyle& style = {});

struct SumoExport {
  bool convert = false;  // also run netconvert and append its network file
  std::optional<fs::path> netconvert;
  sumo::CoordinateMode mode = sumo::CoordinateMode::Planar;
};

/// Plain SUMO files for a GMNS directory.
std::vector<fs::path> export_sumo_dir(const fs::path& gmns_dir, const fs::path& out_dir,
                                      const SumoExport& options = {});

/// What the routing tools need to run the pipelines.
struct ToolContext {
  fs::path out_root = ".";
  Projection projection;
  std::int64_t max_grid_nodes = kDefaultMaxGridNodes;
  PlaceOptions place;
  ImageOptions image;
  /// Created on first use of the place tool.
  std::function<std::unique_ptr<osm::GeocoderInterface>()> make_geocoder;
};

/// The four generation tools (grid, place, from-image, from-sketch). Each
/// call writes into a fresh numbered directory under out_root and returns
/// the produced paths, one per line.
router::ToolRegistry default_registry(ToolContext context);

/// Same descriptors; every tool only checks its arguments and echoes them.
/// Used to score routing without running the pipelines.
router::ToolRegistry dry_run_registry();

std::vector<router::ToolDescriptor> default_descriptors();

}  // namespace roadgen::pipeline
