#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "roadgen/network.hpp"

namespace roadgen::gmns {

inline constexpr std::string_view kNodeHeader = "node_id,x_coord,y_coord";
inline constexpr std::string_view kLinkHeader = "link_id,from_node_id,to_node_id,length,lanes,geometry";
inline constexpr std::string_view kNodeFile = "Node.csv";
inline constexpr std::string_view kLinkFile = "Link.csv";

inline constexpr int kCoordDecimals = 6;
inline constexpr int kLengthDecimals = 6;

struct GmnsPaths {
  std::filesystem::path node_csv;
  std::filesystem::path link_csv;
};

/// Fixed-point formatting used for every numeric CSV/XML field.
std::string format_fixed(double value, int decimals);

/// `LINESTRING (lon lat, lon lat, ...)` with kCoordDecimals digits.
std::string to_wkt(const std::vector<GeoPoint>& line);

/// Throws Error{ParseError} unless `text` is a LINESTRING with >= 2 pairs.
std::vector<GeoPoint> parse_wkt_linestring(std::string_view text);

std::string node_csv_text(const NetworkGraph& g);
std::string link_csv_text(const NetworkGraph& g);

/// Writes Node.csv and Link.csv into `out_dir` (created if needed) and
/// returns their absolute paths. The graph must pass validate_graph.
GmnsPaths emit_gmns(const NetworkGraph& g, const std::filesystem::path& out_dir);

/// Reads a Node.csv / Link.csv pair. Columns are matched by header name;
/// `lanes` defaults to 2, `length` to the haversine length of the
/// geometry and `geometry` to the straight from-to segment when absent.
/// Planar coordinates are recovered through `projection`.
NetworkGraph parse_gmns(const std::filesystem::path& node_csv, const std::filesystem::path& link_csv,
                        const Projection& projection = {});

NetworkGraph parse_gmns_text(std::string_view node_csv, std::string_view link_csv,
                             const Projection& projection = {});

/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace roadgen::gmns
