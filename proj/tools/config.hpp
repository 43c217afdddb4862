#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "roadgen/geo.hpp"

namespace roadgen::cli {

/// Returns nullptr for unset variables.
using EnvLookup = std::function<const char*(const char*)>;

EnvLookup process_env();

struct Config {
  Projection projection;

  std::string geocoder = "nominatim";  // nominatim | amap
  std::string geocoder_endpoint;       // empty: the provider's public endpoint
  std::string geocoder_key_env = "ROADGEN_GEOCODER_KEY";

  std::string osm_endpoint = "https://overpass-api.de/api/interpreter";

  std::string model_base_url = "https://api.openai.com/v1";
  std::string model_name = "gpt-3.5-turbo";
  std::string model_key_env = "ROADGEN_MODEL_API_KEY";

  std::filesystem::path out_dir = "roadgen-out";

  std::int64_t max_grid_nodes = 10'000;
  std::size_t max_osm_bytes = std::size_t{64} << 20;
  int max_steps = 5;

  /// The file the values came from, if any.
  std::optional<std::filesystem::path> source;
};

/// INI text:
///
///   [projection]  lat, lon, scale
///   [geocoder]    provider, endpoint, key_env
///   [osm]         endpoint, max_bytes
///   [model]       base_url, name, key_env
///   [output]      dir
///   [limits]      max_grid_nodes, max_steps
///
/// Unknown keys are rejected so typos surface. Throws Error{ParseError}.
void apply_ini(Config& config, const std::string& text, const std::string& origin = "config");

/// ROADGEN_GEOCODER, ROADGEN_GEOCODER_URL, ROADGEN_OSM_ENDPOINT,
/// ROADGEN_MODEL_BASE_URL and ROADGEN_MODEL_NAME, when set.
void apply_env(Config& config, const EnvLookup& env);

/// Secret named by a *_key_env field; empty when unset.
std::string resolve_key(const std::string& env_name, const EnvLookup& env);

/// First existing of: `explicit_path`, $ROADGEN_CONFIG, ./roadgen.ini,
/// $XDG_CONFIG_HOME/roadgen/roadgen.ini, ~/.config/roadgen/roadgen.ini.
/// An explicit path or $ROADGEN_CONFIG that does not exist is an
/// Error{IoFailure}.
std::optional<std::filesystem::path> find_config(const std::optional<std::filesystem::path>& explicit_path,
                                                 const EnvLookup& env);

/// Throws Error{InvalidArgument} for a non-positive scale, an invalid
/// anchor, an unknown geocoder or a relative endpoint URL.
void validate(const Config& config);

}  // namespace roadgen::cli
