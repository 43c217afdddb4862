#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "roadgen/error.hpp"
#include "roadgen/metrics.hpp"
#include "roadgen/pipeline.hpp"

namespace roadgen::cli {

namespace fs = std::filesystem;
using router::Json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ProjectionFlags {
  std::optional<double> lat;
  std::optional<double> lon;
  std::optional<double> scale;

  void add_to(CLI::App* cmd, bool with_scale) {
    cmd->add_option("--lat", lat, "Anchor latitude in degrees");
    cmd->add_option("--lon", lon, "Anchor longitude in degrees");
    if (with_scale) cmd->add_option("--scale", scale, "Degrees per planar unit (default 0.004)");
  }

  void apply(Projection& p) const {
    if (lat) p.anchor.lat = *lat;
    if (lon) p.anchor.lon = *lon;
    if (scale) p.scale = *scale;
  }
};

struct ImageFlags {
  fs::path input;
  std::optional<fs::path> out;
  double m_per_px = 1.0;
  std::optional<fs::path> dump_stages;
  bool no_refine = false;
  extract::CornerParams corners;
  extract::ConnectParams connect;
  ProjectionFlags anchor;

  void add_to(CLI::App* cmd, const char* input_flag, const char* input_help) {
    cmd->add_option(input_flag, input, input_help)->required();
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--m-per-px", m_per_px, "Ground meters per pixel")->check(CLI::PositiveNumber);
    cmd->add_option("--dump-stages", dump_stages, "Write intermediate rasters into this directory");
    cmd->add_flag("--no-refine", no_refine, "Run the plain two-round extraction");
    cmd->add_option("--window", corners.window, "Structure tensor window (odd)");
    cmd->add_option("--quality", corners.quality, "Corner threshold relative to the strongest response");
    cmd->add_option("--min-distance", corners.min_distance, "Minimum pixels between corners");
    cmd->add_option("--max-corners", corners.max_corners, "Corner cap");
    cmd->add_option("--eps", connect.collinearity_eps, "Collinearity tolerance in pixels");
    anchor.add_to(cmd, false);
  }

  pipeline::ImageOptions options(const Config& cfg) const {
    pipeline::ImageOptions o;
    o.corners = corners;
    o.connect = connect;
    o.refine.enabled = !no_refine;
    o.m_per_px = m_per_px;
    Projection p = cfg.projection;
    anchor.apply(p);
    o.anchor = p.anchor;
    o.dump_stages = dump_stages;
    return o;
  }
};

std::unique_ptr<osm::GeocoderInterface> make_geocoder(const Config& cfg, const EnvLookup& env) {
  osm::HttpGeocoderOptions opts;
  opts.api_key = resolve_key(cfg.geocoder_key_env, env);
  if (cfg.geocoder == "amap") {
    opts.endpoint = cfg.geocoder_endpoint.empty() ? osm::AmapGeocoder::kDefaultEndpoint : cfg.geocoder_endpoint;
    return std::make_unique<osm::AmapGeocoder>(opts);
  }
  opts.endpoint = cfg.geocoder_endpoint.empty() ? osm::NominatimGeocoder::kDefaultEndpoint : cfg.geocoder_endpoint;
  return std::make_unique<osm::NominatimGeocoder>(opts);
}

osm::FetchOptions fetch_options(const Config& cfg) {
  osm::FetchOptions f;
  f.endpoint = cfg.osm_endpoint;
  f.max_bytes = cfg.max_osm_bytes;
  return f;
}

pipeline::ToolContext tool_context(const Config& cfg, const fs::path& out_root, const EnvLookup& env) {
  pipeline::ToolContext ctx;
  ctx.out_root = out_root;
  ctx.projection = cfg.projection;
  ctx.max_grid_nodes = cfg.max_grid_nodes;
  ctx.place.fetch = fetch_options(cfg);
  ctx.image.anchor = cfg.projection.anchor;
  ctx.make_geocoder = [cfg, env] { return make_geocoder(cfg, env); };
  return ctx;
}

std::unique_ptr<router::ModelClientInterface> http_model(const Config& cfg, const EnvLookup& env) {
  router::ChatEndpoint ep;
  ep.base_url = cfg.model_base_url;
  ep.model = cfg.model_name;
  ep.api_key = resolve_key(cfg.model_key_env, env);
  return std::make_unique<router::HttpChatModel>(ep);
}

/// One reply list per trial: a JSON array whose elements are arrays of
/// replies (strings, or objects taken as their JSON text).
std::vector<std::vector<std::string>> load_trial_scripts(const fs::path& path) {
  const Json j = Json::parse(read_text(path), nullptr, false);
  if (j.is_discarded() || !j.is_array()) {
    throw Error(ErrorKind::ParseError, path.string() + ": expected a JSON array of reply arrays");
  }
  std::vector<std::vector<std::string>> scripts;
  for (const auto& trial : j) {
    if (!trial.is_array()) throw Error(ErrorKind::ParseError, path.string() + ": each trial needs a reply array");
    auto& replies = scripts.emplace_back();
    for (const auto& r : trial) replies.push_back(r.is_string() ? r.get<std::string>() : r.dump());
  }
  return scripts;
}

void print_paths(std::ostream& out, const std::vector<fs::path>& paths) {
  for (const auto& p : paths) out << p.string() << '\n';
}

void print_observation_paths(std::ostream& out, const router::SessionLog& log) {
  for (const auto& step : log.steps) {
    if (step.failed) continue;
    std::istringstream lines(step.observation);
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty()) out << line << '\n';
    }
  }
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::SpecInvalid:
    case ErrorKind::RadiusOutOfRange:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
             const EnvLookup& env) {
  CLI::App app{"Road network generation for traffic simulation", "roadgen"};
  app.require_subcommand(1);
  std::optional<fs::path> config_path;
  app.add_option("--config", config_path, "INI configuration file");

  // grid
  auto* grid = app.add_subcommand("grid", "Regular N x M grid network");
  std::int64_t rows = 0, cols = 0;
  std::optional<fs::path> grid_out;
  ProjectionFlags grid_proj;
  const auto positive = CLI::Range(std::int64_t{1}, std::numeric_limits<std::int64_t>::max());
  grid->add_option("--rows", rows, "Rows of intersections")->required()->check(positive);
  grid->add_option("--cols", cols, "Columns of intersections")->required()->check(positive);
  grid->add_option("--out", grid_out, "Output directory");
  grid_proj.add_to(grid, true);

  // place
  auto* place = app.add_subcommand("place", "Network around a named place, from OpenStreetMap");
  std::optional<std::string> place_name;
  double radius = osm::kDefaultSearchRadiusM;
  std::optional<fs::path> place_osm, place_out;
  place->add_option("--name", place_name, "Place name to geocode");
  place->add_option("--radius", radius, "Search radius in meters");
  place->add_option("--osm", place_osm, "Use this OSM XML file instead of downloading");
  place->add_option("--out", place_out, "Output directory");

  // from-image / from-sketch
  auto* image = app.add_subcommand("from-image", "Network from a road mask image");
  ImageFlags image_flags;
  image_flags.add_to(image, "--mask", "Road mask (PNG or PGM, pixel >= 128 is road)");
  auto* sketch_cmd = app.add_subcommand("from-sketch", "Network from a hand-drawn sketch");
  ImageFlags sketch_flags;
  sketch_flags.add_to(sketch_cmd, "--image", "Sketch image (PNG or PGM)");

  // render
  auto* render = app.add_subcommand("render", "SVG drawing of a GMNS network");
  fs::path render_gmns, render_out;
  RenderStyle style;
  render->add_option("--gmns", render_gmns, "Directory holding Node.csv and Link.csv")->required();
  render->add_option("--out", render_out, "SVG file to write")->required();
  render->add_option("--width", style.width, "Canvas width")->check(CLI::PositiveNumber);
  render->add_option("--height", style.height, "Canvas height")->check(CLI::PositiveNumber);

  // export-sumo
  auto* sumo_cmd = app.add_subcommand("export-sumo", "SUMO plain XML (and optionally a net file)");
  fs::path sumo_gmns, sumo_out;
  bool run_netconvert = false, geo_coords = false;
  std::optional<fs::path> netconvert_path;
  sumo_cmd->add_option("--gmns", sumo_gmns, "Directory holding Node.csv and Link.csv")->required();
  sumo_cmd->add_option("--out", sumo_out, "Output directory")->required();
  sumo_cmd->add_flag("--netconvert", run_netconvert, "Also run netconvert");
  sumo_cmd->add_option("--netconvert-path", netconvert_path, "netconvert executable (implies --netconvert)");
  sumo_cmd->add_flag("--geo", geo_coords, "Write lon/lat instead of planar coordinates");

  // eval-router
  auto* eval = app.add_subcommand("eval-router", "Score tool routing over a trial set");
  fs::path trials_path, eval_out;
  std::optional<fs::path> eval_mock, eval_logs, eval_work;
  bool execute = false;
  std::optional<int> eval_steps;
  router::RepeatMode repeat_mode = router::RepeatMode::PerTrial;
  const std::map<std::string, router::RepeatMode> repeat_modes{
      {"per-trial", router::RepeatMode::PerTrial}, {"per-invocation", router::RepeatMode::PerInvocation}};
  eval->add_option("--trials", trials_path, "Line-delimited JSON trials")->required();
  eval->add_option("--out", eval_out, "Metrics CSV to write")->required();
  eval->add_option("--mock", eval_mock, "Scripted replies: JSON array with one reply array per trial");
  eval->add_option("--logs", eval_logs, "Write session logs here (JSON lines)");
  eval->add_flag("--execute", execute, "Run the real pipelines instead of dry-run tools");
  eval->add_option("--work", eval_work, "Output root for --execute");
  eval->add_option("--max-steps", eval_steps, "Tool calls allowed per session")->check(CLI::PositiveNumber);
  eval->add_option("--repeat-mode", repeat_mode, "per-trial or per-invocation")
      ->transform(CLI::CheckedTransformer(repeat_modes, CLI::ignore_case));

  // chat
  auto* chat = app.add_subcommand("chat", "Read requests from standard input and run the tools they ask for");
  std::optional<fs::path> chat_mock, chat_out;
  std::optional<int> chat_steps;
  chat->add_option("--mock", chat_mock, "Scripted model replies (JSON array or one per line)");
  chat->add_option("--out", chat_out, "Output root for produced networks");
  chat->add_option("--max-steps", chat_steps, "Tool calls allowed per request")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Config cfg;
  try {
    if (auto path = find_config(config_path, env)) {
      apply_ini(cfg, read_text(*path), path->string());
      cfg.source = *path;
    }
    grid_proj.apply(cfg.projection);
    apply_env(cfg, env);
    validate(cfg);
  } catch (const Error& e) {
    err << "roadgen: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (grid->parsed()) {
      GridSpec spec{rows, cols, cfg.projection, cfg.max_grid_nodes};
      const auto res = pipeline::build_grid(spec, grid_out.value_or(cfg.out_dir));
      print_paths(out, res.files);
    } else if (place->parsed()) {
      if (!place_name && !place_osm) {
        err << "roadgen place: give --name, --osm or both\n";
        return kExitUsage;
      }
      pipeline::PlaceOptions opts;
      opts.radius_m = radius;
      opts.fetch = fetch_options(cfg);
      opts.osm_file = place_osm;
      std::unique_ptr<osm::GeocoderInterface> geocoder;
      if (place_name) geocoder = make_geocoder(cfg, env);
      const auto res = pipeline::build_place(place_name.value_or(""), geocoder.get(),
                                             place_out.value_or(cfg.out_dir), opts);
      err << "roadgen place: " << res.graph.nodes.size() << " nodes, " << res.graph.links.size() << " links\n";
      print_paths(out, res.files);
    } else if (image->parsed() || sketch_cmd->parsed()) {
      const bool is_mask = image->parsed();
      const ImageFlags& f = is_mask ? image_flags : sketch_flags;
      const auto opts = f.options(cfg);
      const fs::path dir = f.out.value_or(cfg.out_dir);
      const auto res = is_mask ? pipeline::build_from_mask(f.input, dir, opts)
                               : pipeline::build_from_sketch(f.input, dir, opts);
      err << "roadgen: " << res.graph.nodes.size() << " nodes, " << res.graph.links.size() << " links\n";
      print_paths(out, res.files);
    } else if (render->parsed()) {
      validate(style);
      out << pipeline::render_gmns_dir(render_gmns, render_out, style).string() << '\n';
    } else if (sumo_cmd->parsed()) {
      pipeline::SumoExport opts;
      opts.convert = run_netconvert || netconvert_path.has_value();
      opts.netconvert = netconvert_path;
      opts.mode = geo_coords ? sumo::CoordinateMode::Geo : sumo::CoordinateMode::Planar;
      print_paths(out, pipeline::export_sumo_dir(sumo_gmns, sumo_out, opts));
    } else if (eval->parsed()) {
      const auto trials = router::read_trials(trials_path.string());
      const auto registry = execute ? pipeline::default_registry(tool_context(
                                          cfg, eval_work.value_or(cfg.out_dir), env))
                                    : pipeline::dry_run_registry();
      router::ModelFactory factory;
      if (eval_mock) {
        auto scripts = std::make_shared<std::vector<std::vector<std::string>>>(load_trial_scripts(*eval_mock));
        if (scripts->size() != trials.size()) {
          err << "roadgen eval-router: " << scripts->size() << " mock scripts for " << trials.size()
              << " trials\n";
          return kExitUsage;
        }
        factory = [scripts](std::size_t i) { return std::make_unique<router::ScriptedModel>((*scripts)[i]); };
      } else {
        factory = [&](std::size_t) { return http_model(cfg, env); };
      }
      router::SessionOptions so;
      so.max_steps = eval_steps.value_or(cfg.max_steps);
      const auto logs = router::run_trials(trials, registry, factory, so);
      const auto table = router::compute_metrics(logs, trials, repeat_mode);
      if (eval_out.has_parent_path()) fs::create_directories(eval_out.parent_path());
      router::write_metrics_csv(eval_out.string(), table);
      out << fs::absolute(eval_out).string() << '\n';
      if (eval_logs) {
        std::ofstream lf(*eval_logs, std::ios::binary);
        for (const auto& log : logs) lf << router::to_json(log).dump() << '\n';
        if (!lf) throw Error(ErrorKind::IoFailure, "cannot write " + eval_logs->string());
        out << fs::absolute(*eval_logs).string() << '\n';
      }
    } else if (chat->parsed()) {
      const auto registry = pipeline::default_registry(tool_context(cfg, chat_out.value_or(cfg.out_dir), env));
      std::unique_ptr<router::ModelClientInterface> model;
      if (chat_mock) {
        model = std::make_unique<router::ScriptedModel>(router::load_script(read_text(*chat_mock)));
      } else {
        model = http_model(cfg, env);
      }
      router::SessionOptions so;
      so.max_steps = chat_steps.value_or(cfg.max_steps);
      std::string request;
      err << "> " << std::flush;
      while (std::getline(in, request)) {
        if (request.find_first_not_of(" \t\r") == std::string::npos) {
          err << "> " << std::flush;
          continue;
        }
        const auto log = router::run_session(request, registry, *model, so);
        print_observation_paths(out, log);
        out.flush();
        if (log.end == router::SessionEnd::Final) {
          err << log.answer << '\n';
        } else {
          err << "(stopped: " << log.abort_reason << ")\n";
        }
        err << "> " << std::flush;
      }
      err << '\n';
    }
  } catch (const Error& e) {
    err << "roadgen: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "roadgen: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace roadgen::cli
