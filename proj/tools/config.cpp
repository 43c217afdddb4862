#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "roadgen/error.hpp"
#include "roadgen/http.hpp"

namespace roadgen::cli {

EnvLookup process_env() {
  return [](const char* name) -> const char* { return std::getenv(name); };
}

namespace {

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
  T v{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError, where + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

void apply_ini(Config& config, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error(ErrorKind::ParseError, origin + ": " + e.what());
  }

  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    const std::string section = item.parents.empty() ? "" : item.parents.front();
    const std::string key = section.empty() ? item.name : section + "." + item.name;
    const std::string where = origin + ": " + key;
    if (item.inputs.size() != 1) throw Error(ErrorKind::ParseError, where + " needs exactly one value");
    const std::string& v = item.inputs.front();

    if (key == "projection.lat") {
      config.projection.anchor.lat = parse_number<double>(v, where);
    } else if (key == "projection.lon") {
      config.projection.anchor.lon = parse_number<double>(v, where);
    } else if (key == "projection.scale") {
      config.projection.scale = parse_number<double>(v, where);
    } else if (key == "geocoder.provider") {
      config.geocoder = v;
    } else if (key == "geocoder.endpoint") {
      config.geocoder_endpoint = v;
    } else if (key == "geocoder.key_env") {
      config.geocoder_key_env = v;
    } else if (key == "osm.endpoint") {
      config.osm_endpoint = v;
    } else if (key == "osm.max_bytes") {
      config.max_osm_bytes = parse_number<std::size_t>(v, where);
    } else if (key == "model.base_url") {
      config.model_base_url = v;
    } else if (key == "model.name") {
      config.model_name = v;
    } else if (key == "model.key_env") {
      config.model_key_env = v;
    } else if (key == "output.dir") {
      config.out_dir = v;
    } else if (key == "limits.max_grid_nodes") {
      config.max_grid_nodes = parse_number<std::int64_t>(v, where);
    } else if (key == "limits.max_steps") {
      config.max_steps = parse_number<int>(v, where);
    } else {
      throw Error(ErrorKind::ParseError, origin + ": unknown key '" + key + "'");
    }
  }
}

void apply_env(Config& config, const EnvLookup& env) {
  auto take = [&](const char* name, std::string& field) {
    if (const char* v = env(name); v && *v) field = v;
  };
  take("ROADGEN_GEOCODER", config.geocoder);
  take("ROADGEN_GEOCODER_URL", config.geocoder_endpoint);
  take("ROADGEN_OSM_ENDPOINT", config.osm_endpoint);
  take("ROADGEN_MODEL_BASE_URL", config.model_base_url);
  take("ROADGEN_MODEL_NAME", config.model_name);
}

std::string resolve_key(const std::string& env_name, const EnvLookup& env) {
  if (env_name.empty()) return {};
  const char* v = env(env_name.c_str());
  return v ? v : "";
}

std::optional<std::filesystem::path> find_config(const std::optional<std::filesystem::path>& explicit_path,
                                                 const EnvLookup& env) {
  namespace fs = std::filesystem;
  auto must_exist = [](const fs::path& p) {
    if (!fs::is_regular_file(p)) throw Error(ErrorKind::IoFailure, "config file not found: " + p.string());
    return p;
  };
  if (explicit_path) return must_exist(*explicit_path);
  if (const char* v = env("ROADGEN_CONFIG"); v && *v) return must_exist(v);

  std::vector<fs::path> candidates{"roadgen.ini"};
  if (const char* xdg = env("XDG_CONFIG_HOME"); xdg && *xdg) {
    candidates.push_back(fs::path(xdg) / "roadgen" / "roadgen.ini");
  } else if (const char* home = env("HOME"); home && *home) {
    candidates.push_back(fs::path(home) / ".config" / "roadgen" / "roadgen.ini");
  }
  for (const auto& c : candidates) {
    if (fs::is_regular_file(c)) return c;
  }
  return std::nullopt;
}

void validate(const Config& config) {
  if (!is_valid(config.projection)) {
    throw Error(ErrorKind::InvalidArgument, "projection needs scale > 0 and a valid anchor");
  }
  if (config.geocoder != "nominatim" && config.geocoder != "amap") {
    throw Error(ErrorKind::InvalidArgument, "unknown geocoder '" + config.geocoder + "'");
  }
  for (const auto* url : {&config.geocoder_endpoint, &config.osm_endpoint, &config.model_base_url}) {
    if (!url->empty()) http::parse_url(*url);
  }
  if (config.max_grid_nodes < 1) throw Error(ErrorKind::InvalidArgument, "max_grid_nodes must be >= 1");
  if (config.max_steps < 1) throw Error(ErrorKind::InvalidArgument, "max_steps must be >= 1");
}

}  // namespace roadgen::cli
