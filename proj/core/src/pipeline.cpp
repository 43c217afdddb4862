#include "roadgen/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include "roadgen/error.hpp"
#include "roadgen/gmns.hpp"
#include "roadgen/sketch.hpp"
#include "roadgen/sumo.hpp"

namespace roadgen::pipeline {

std::string paths_text(const Outputs& out) {
  std::string s;
  for (const auto& p : out.files) {
    s += p.string();
    s += '\n';
  }
  return s;
}

Outputs emit_network(const NetworkGraph& g, const fs::path& out_dir, const RenderStyle& style) {
  Outputs out;
  const auto paths = gmns::emit_gmns(g, out_dir);
  const fs::path svg = fs::absolute(out_dir / kSvgFile);
  write_svg(g, svg, style);
  out.files = {paths.node_csv, paths.link_csv, svg};
  out.graph = g;
  return out;
}

Outputs build_grid(const GridSpec& spec, const fs::path& out_dir, const RenderStyle& style) {
  return emit_network(generate_grid(spec), out_dir, style);
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  out << data;
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
}

GeoPoint extent_centre(const osm::OsmDocument& doc) {
  if (doc.nodes.empty()) throw Error(ErrorKind::EmptyNetwork, "OSM file has no nodes");
  double lo_lat = 90, hi_lat = -90, lo_lon = 180, hi_lon = -180;
  for (const auto& [id, p] : doc.nodes) {
    lo_lat = std::min(lo_lat, p.lat);
    hi_lat = std::max(hi_lat, p.lat);
    lo_lon = std::min(lo_lon, p.lon);
    hi_lon = std::max(hi_lon, p.lon);
  }
  return {(lo_lon + hi_lon) / 2.0, (lo_lat + hi_lat) / 2.0};
}

}  // namespace

Outputs build_place(const std::string& name, osm::GeocoderInterface* geocoder, const fs::path& out_dir,
                    const PlaceOptions& options) {
  std::optional<GeoPoint> centre;
  if (geocoder) {
    centre = osm::geocode(name, *geocoder).point;
  } else if (!options.osm_file) {
    throw Error(ErrorKind::InvalidArgument, "a geocoder is required unless an OSM file is given");
  }

  std::string xml;
  if (options.osm_file) {
    xml = read_file(*options.osm_file);
  } else {
    xml = osm::fetch_osm(osm::bbox_around(*centre, options.radius_m), options.fetch);
  }
  const osm::OsmDocument doc = osm::parse_osm(xml);
  if (!centre) centre = extent_centre(doc);

  const Projection frame{*centre, 1.0 / kMetersPerDegree};
  const NetworkGraph g = osm::osm_to_network(doc, options.filter, frame);

  fs::create_directories(out_dir);
  Outputs out = emit_network(g, out_dir);
  if (!options.osm_file) {
    const fs::path raw = fs::absolute(out_dir / kRawOsmFile);
    write_file(raw, xml);
    out.files.push_back(raw);
  }
  return out;
}

Outputs extract_to_files(const BinaryMask& mask, const fs::path& out_dir, const ImageOptions& options) {
  extract::ExtractionStages stages;
  const Projection proj = extract::image_projection(options.m_per_px, options.anchor);
  const NetworkGraph g = extract::extract_network(mask, options.corners, options.connect, proj, options.m_per_px,
                                                  options.refine, options.dump_stages ? &stages : nullptr);
  Outputs out = emit_network(g, out_dir);
  if (options.dump_stages) {
    const fs::path dir = fs::absolute(*options.dump_stages);
    fs::create_directories(dir);
    const std::pair<const char*, GrayImage> dumps[] = {
        {"mask.png", mask.to_gray()},
        {"corners.png", extract::corner_overlay(mask, stages.corners)},
        {"first_round.png", stages.first_reconstruction.to_gray()},
    };
    for (const auto& [file, img] : dumps) {
      write_gray_image(dir / file, img);
      out.files.push_back(dir / file);
    }
  }
  return out;
}

Outputs build_from_mask(const fs::path& mask_path, const fs::path& out_dir, const ImageOptions& options) {
  const GrayImage img = read_gray_image(mask_path);
  if (img.empty()) throw Error(ErrorKind::ImageEmpty, mask_path.string() + " has no pixels");
  return extract_to_files(BinaryMask::from_gray(img), out_dir, options);
}

Outputs build_from_sketch(const fs::path& image_path, const fs::path& out_dir, const ImageOptions& options) {
  const GrayImage img = read_gray_image(image_path);
  return extract_to_files(sketch::preprocess_sketch(img), out_dir, options);
}

namespace {

gmns::GmnsPaths gmns_pair(const fs::path& dir) {
  gmns::GmnsPaths p{dir / gmns::kNodeFile, dir / gmns::kLinkFile};
  for (const auto& f : {p.node_csv, p.link_csv}) {
    if (!fs::exists(f)) throw Error(ErrorKind::IoFailure, "missing " + f.string());
  }
  return p;
}

}  // namespace

fs::path render_gmns_dir(const fs::path& gmns_dir, const fs::path& svg_path, const RenderStyle& style) {
  const auto p = gmns_pair(gmns_dir);
  const NetworkGraph g = gmns::parse_gmns(p.node_csv, p.link_csv);
  if (svg_path.has_parent_path()) fs::create_directories(svg_path.parent_path());
  write_svg(g, svg_path, style);
  return fs::absolute(svg_path);
}

std::vector<fs::path> export_sumo_dir(const fs::path& gmns_dir, const fs::path& out_dir,
                                      const SumoExport& options) {
  const auto p = gmns_pair(gmns_dir);
  const NetworkGraph g = gmns::parse_gmns(p.node_csv, p.link_csv);
  const auto files = sumo::export_sumo_plain(g, options.mode);
  const auto plain = sumo::write_sumo_plain(files, out_dir);
  std::vector<fs::path> out{fs::absolute(plain.nod_xml), fs::absolute(plain.edg_xml)};
  if (options.convert) {
    sumo::NetconvertOptions opts;
    opts.executable = options.netconvert;
    out.push_back(fs::absolute(sumo::run_netconvert(files, out_dir, opts)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Routing tools

namespace {

using router::ArgSpec;
using router::Json;
using router::Tool;
using router::ToolDescriptor;

std::optional<double> number_arg(const Json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return std::nullopt;
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) {
    const std::string s = it->get<std::string>();
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && end == s.data() + s.size()) return v;
  }
  throw Error(ErrorKind::InvalidArgument, std::string("argument '") + key + "' must be a number");
}

std::int64_t integer_arg(const Json& args, const char* key) {
  const auto v = number_arg(args, key);
  if (!v) throw Error(ErrorKind::InvalidArgument, std::string("argument '") + key + "' is required");
  if (std::floor(*v) != *v || std::abs(*v) > 1e15) {
    throw Error(ErrorKind::InvalidArgument, std::string("argument '") + key + "' must be an integer");
  }
  return static_cast<std::int64_t>(*v);
}

std::string text_arg(const Json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw Error(ErrorKind::InvalidArgument, std::string("argument '") + key + "' must be a non-empty string");
  }
  return it->get<std::string>();
}

ToolDescriptor grid_descriptor() {
  return {"grid",
          "Generate a regular grid road network with the given number of rows and columns of intersections. "
          "Use it when the user asks for a grid, lattice, checkerboard or N x M network. Adjacent "
          "intersections are one planar unit apart; lat, lon and scale (degrees per unit, default 0.004, "
          "about 445 m) place it on the map. Returns the Node.csv, Link.csv and SVG paths.",
          {{"rows", "integer", true},
           {"cols", "integer", true},
           {"lat", "number", false},
           {"lon", "number", false},
           {"scale", "number", false}}};
}

ToolDescriptor place_descriptor() {
  return {"place",
          "Build the real road network around a named place (city, district, street, landmark) from "
          "OpenStreetMap. Use it when the user names a location. radius is the search radius in meters "
          "(default 1000, at most 50000). Returns the Node.csv, Link.csv, SVG and raw OSM paths.",
          {{"name", "text", true}, {"radius", "number", false}}};
}

ToolDescriptor image_descriptor() {
  return {"from-image",
          "Extract a road network from a satellite road mask image file (white roads on black). Use it when "
          "the user provides a satellite image, remote sensing image or road mask. m_per_px is the ground "
          "size of one pixel in meters (default 1). Returns the Node.csv, Link.csv and SVG paths.",
          {{"mask", "path", true}, {"m_per_px", "number", false}}};
}

ToolDescriptor sketch_descriptor() {
  return {"from-sketch",
          "Extract a road network from a hand-drawn sketch image file (dark strokes on light paper or the "
          "reverse). Use it when the user provides a drawing or sketch. m_per_px is the ground size of one "
          "pixel in meters (default 1). Returns the Node.csv, Link.csv and SVG paths.",
          {{"image", "path", true}, {"m_per_px", "number", false}}};
}

/// Hands out out_root/<tool>-NNN directories that do not exist yet.
class RunDirs {
 public:
  explicit RunDirs(fs::path root) : root_(std::move(root)) {}

  fs::path next(const std::string& tool) {
    std::lock_guard lock(mu_);
    for (int i = 1;; ++i) {
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "-%03d", i);
      fs::path dir = root_ / (tool + suffix);
      if (!fs::exists(dir)) {
        fs::create_directories(dir);
        return fs::absolute(dir);
      }
    }
  }

 private:
  fs::path root_;
  std::mutex mu_;
};

}  // namespace

std::vector<ToolDescriptor> default_descriptors() {
  return {grid_descriptor(), place_descriptor(), image_descriptor(), sketch_descriptor()};
}

router::ToolRegistry default_registry(ToolContext context) {
  auto ctx = std::make_shared<const ToolContext>(std::move(context));
  auto dirs = std::make_shared<RunDirs>(ctx->out_root);
  auto geocoder = std::make_shared<std::unique_ptr<osm::GeocoderInterface>>();
  auto geocoder_mu = std::make_shared<std::mutex>();

  router::ToolRegistry reg;
  reg.add({grid_descriptor(), [ctx, dirs](const Json& args) {
             GridSpec spec;
             spec.rows = integer_arg(args, "rows");
             spec.cols = integer_arg(args, "cols");
             spec.projection = ctx->projection;
             spec.max_nodes = ctx->max_grid_nodes;
             if (auto v = number_arg(args, "lat")) spec.projection.anchor.lat = *v;
             if (auto v = number_arg(args, "lon")) spec.projection.anchor.lon = *v;
             if (auto v = number_arg(args, "scale")) spec.projection.scale = *v;
             return paths_text(build_grid(spec, dirs->next("grid")));
           }});
  reg.add({place_descriptor(), [ctx, dirs, geocoder, geocoder_mu](const Json& args) {
             PlaceOptions opts = ctx->place;
             if (auto v = number_arg(args, "radius")) opts.radius_m = *v;
             const std::string name = text_arg(args, "name");
             osm::GeocoderInterface* g = nullptr;
             {
               std::lock_guard lock(*geocoder_mu);
               if (!*geocoder && ctx->make_geocoder) *geocoder = ctx->make_geocoder();
               g = geocoder->get();
             }
             return paths_text(build_place(name, g, dirs->next("place"), opts));
           }});
  reg.add({image_descriptor(), [ctx, dirs](const Json& args) {
             ImageOptions opts = ctx->image;
             opts.dump_stages.reset();
             if (auto v = number_arg(args, "m_per_px")) opts.m_per_px = *v;
             return paths_text(build_from_mask(text_arg(args, "mask"), dirs->next("from-image"), opts));
           }});
  reg.add({sketch_descriptor(), [ctx, dirs](const Json& args) {
             ImageOptions opts = ctx->image;
             opts.dump_stages.reset();
             if (auto v = number_arg(args, "m_per_px")) opts.m_per_px = *v;
             return paths_text(build_from_sketch(text_arg(args, "image"), dirs->next("from-sketch"), opts));
           }});
  return reg;
}

router::ToolRegistry dry_run_registry() {
  router::ToolRegistry reg;
  for (auto& d : default_descriptors()) {
    const std::string name = d.name;
    reg.add({std::move(d), [name](const Json& args) { return "dry-run " + name + " " + args.dump(); }});
  }
  return reg;
}

}  // namespace roadgen::pipeline
