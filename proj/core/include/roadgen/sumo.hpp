#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "roadgen/network.hpp"

namespace roadgen::sumo {

struct SumoPlainFiles {
  std::string nod_xml;
  std::string edg_xml;
};

enum class CoordinateMode {
  Planar,  // grid units / pixels, what netconvert expects in plain files
  Geo,     // lon/lat, for netconvert runs with projection options
};

/// `<nodes>` / `<edges>` plain-XML documents, ordered by id.
SumoPlainFiles export_sumo_plain(const NetworkGraph& g, CoordinateMode mode = CoordinateMode::Planar);

struct SumoPaths {
  std::filesystem::path nod_xml;
  std::filesystem::path edg_xml;
};

/// Writes `<stem>.nod.xml` and `<stem>.edg.xml` into `out_dir`.
SumoPaths write_sumo_plain(const SumoPlainFiles& files, const std::filesystem::path& out_dir,
                           const std::string& stem = "network");

/// Searches PATH the way a shell would. Returns nullopt when not found.
std::optional<std::filesystem::path> find_executable(const std::string& name);

struct NetconvertOptions {
  /// Explicit executable; otherwise $ROADGEN_NETCONVERT, then `netconvert` on PATH.
  std::optional<std::filesystem::path> executable;
  std::string stem = "network";
};

/// Writes the plain files into `out_dir`, runs netconvert on them and
/// returns the produced `<stem>.net.xml`. Throws Error{ToolMissing} when
/// no executable is found and Error{ToolFailed} (with the tool's captured
/// output) on a nonzero exit or a missing output file.
std::filesystem::path run_netconvert(const SumoPlainFiles& files, const std::filesystem::path& out_dir,
                                     const NetconvertOptions& options = {});

}  // namespace roadgen::sumo
