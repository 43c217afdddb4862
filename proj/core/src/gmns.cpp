#include "roadgen/gmns.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "roadgen/error.hpp"

namespace roadgen::gmns {

namespace fs = std::filesystem;

std::string format_fixed(double value, int decimals) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out(buf, static_cast<std::size_t>(n));
  // "-0.000000" and "0.000000" must serialize identically.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string to_wkt(const std::vector<GeoPoint>& line) {
  std::string out = "LINESTRING (";
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (i) out += ", ";
    out += format_fixed(line[i].lon, kCoordDecimals);
    out += ' ';
    out += format_fixed(line[i].lat, kCoordDecimals);
  }
  out += ')';
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
}

/// CSV table with header lookup by column name.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table parse_table(std::string_view text, std::string_view what) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  Table t;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    // Records may contain newlines only inside quotes.
    std::size_t end = pos;
    bool in_quotes = false;
    while (end < text.size() && (in_quotes || text[end] != '\n')) {
      if (text[end] == '"') in_quotes = !in_quotes;
      ++end;
    }
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    auto fields = split_csv_record(line);
    if (!have_header) {
      for (auto& f : fields) f = std::string(trim(f));
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() < t.header.size()) fields.resize(t.header.size());
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  if (!have_header) throw Error(ErrorKind::SchemaError, std::string(what) + " has no header row");
  return t;
}

std::size_t require(const Table& t, std::string_view name, std::string_view what) {
  auto c = t.column(name);
  if (!c) throw Error(ErrorKind::SchemaError, std::string(what) + " lacks column '" + std::string(name) + "'");
  return *c;
}

[[noreturn]] void bad_field(std::string_view what, std::size_t line, std::string_view column,
                            std::string_view value) {
  std::ostringstream os;
  os << what << " line " << line << ": bad " << column << " value '" << value << "'";
  throw Error(ErrorKind::ParseError, os.str());
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields(1);
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::vector<GeoPoint> parse_wkt_linestring(std::string_view text) {
  auto fail = [&] { return Error(ErrorKind::ParseError, "malformed WKT '" + std::string(text) + "'"); };
  std::string_view s = trim(text);
  constexpr std::string_view kTag = "LINESTRING";
  if (s.size() < kTag.size()) throw fail();
  for (std::size_t i = 0; i < kTag.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(s[i])) != kTag[i]) throw fail();
  }
  s = trim(s.substr(kTag.size()));
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw fail();
  s = s.substr(1, s.size() - 2);

  std::vector<GeoPoint> pts;
  while (!s.empty()) {
    const auto comma = s.find(',');
    std::string_view pair = trim(s.substr(0, comma));
    s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
    const auto space = pair.find_first_of(" \t");
    if (space == std::string_view::npos) throw fail();
    auto lon = to_double(pair.substr(0, space));
    auto lat = to_double(trim(pair.substr(space)));
    if (!lon || !lat) throw fail();
    pts.push_back({*lon, *lat});
  }
  if (pts.size() < 2) throw fail();
  return pts;
}

std::string node_csv_text(const NetworkGraph& g) {
  std::vector<const NodeRecord*> nodes;
  nodes.reserve(g.nodes.size());
  for (const auto& n : g.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(),
            [](const NodeRecord* a, const NodeRecord* b) { return a->node_id < b->node_id; });

  std::string out(kNodeHeader);
  out += '\n';
  for (const auto* n : nodes) {
    out += std::to_string(n->node_id);
    out += ',';
    out += format_fixed(n->geo.lon, kCoordDecimals);
    out += ',';
    out += format_fixed(n->geo.lat, kCoordDecimals);
    out += '\n';
  }
  return out;
}

std::string link_csv_text(const NetworkGraph& g) {
  std::vector<const LinkRecord*> links;
  links.reserve(g.links.size());
  for (const auto& l : g.links) links.push_back(&l);
  std::sort(links.begin(), links.end(),
            [](const LinkRecord* a, const LinkRecord* b) { return a->link_id < b->link_id; });

  std::string out(kLinkHeader);
  out += '\n';
  for (const auto* l : links) {
    out += std::to_string(l->link_id);
    out += ',';
    out += std::to_string(l->from_node_id);
    out += ',';
    out += std::to_string(l->to_node_id);
    out += ',';
    out += format_fixed(l->length_m, kLengthDecimals);
    out += ',';
    out += std::to_string(l->lanes);
    out += ',';
    out += quote_if_needed(to_wkt(l->geometry));
    out += '\n';
  }
  return out;
}

GmnsPaths emit_gmns(const NetworkGraph& g, const fs::path& out_dir) {
  if (auto report = validate_graph(g); !report.ok()) {
    throw Error(ErrorKind::InvalidArgument, "refusing to emit an invalid graph:\n" + report.summary());
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error(ErrorKind::IoFailure, "cannot create directory " + out_dir.string());
  }
  const fs::path dir = fs::absolute(out_dir).lexically_normal();
  GmnsPaths paths{dir / kNodeFile, dir / kLinkFile};
  write_file(paths.node_csv, node_csv_text(g));
  write_file(paths.link_csv, link_csv_text(g));
  return paths;
}

NetworkGraph parse_gmns_text(std::string_view node_text, std::string_view link_text,
                             const Projection& projection) {
  constexpr std::string_view kNodes = "Node.csv";
  constexpr std::string_view kLinks = "Link.csv";
  NetworkGraph g;
  g.projection = projection;

  const Table nodes = parse_table(node_text, kNodes);
  const auto c_id = require(nodes, "node_id", kNodes);
  const auto c_x = require(nodes, "x_coord", kNodes);
  const auto c_y = require(nodes, "y_coord", kNodes);

  std::unordered_map<NodeId, GeoPoint> node_geo;
  for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
    const auto& row = nodes.rows[r];
    const auto line = nodes.line_numbers[r];
    auto id = to_int(row[c_id]);
    if (!id) bad_field(kNodes, line, "node_id", row[c_id]);
    auto x = to_double(row[c_x]);
    if (!x) bad_field(kNodes, line, "x_coord", row[c_x]);
    auto y = to_double(row[c_y]);
    if (!y) bad_field(kNodes, line, "y_coord", row[c_y]);
    NodeRecord n;
    n.node_id = *id;
    n.geo = {*x, *y};
    if (!is_valid(n.geo)) bad_field(kNodes, line, "x_coord/y_coord", row[c_x] + " " + row[c_y]);
    n.planar = geo_unproject(n.geo, projection);
    node_geo.emplace(n.node_id, n.geo);
    g.nodes.push_back(n);
  }

  const Table links = parse_table(link_text, kLinks);
  const auto c_lid = require(links, "link_id", kLinks);
  const auto c_from = require(links, "from_node_id", kLinks);
  const auto c_to = require(links, "to_node_id", kLinks);
  const auto c_len = links.column("length");
  const auto c_lanes = links.column("lanes");
  const auto c_geom = links.column("geometry");

  for (std::size_t r = 0; r < links.rows.size(); ++r) {
    const auto& row = links.rows[r];
    const auto line = links.line_numbers[r];
    LinkRecord l;
    auto id = to_int(row[c_lid]);
    if (!id) bad_field(kLinks, line, "link_id", row[c_lid]);
    auto from = to_int(row[c_from]);
    if (!from) bad_field(kLinks, line, "from_node_id", row[c_from]);
    auto to = to_int(row[c_to]);
    if (!to) bad_field(kLinks, line, "to_node_id", row[c_to]);
    l.link_id = *id;
    l.from_node_id = *from;
    l.to_node_id = *to;

    const auto from_geo = node_geo.find(l.from_node_id);
    const auto to_geo = node_geo.find(l.to_node_id);
    for (auto [it, nid] : {std::pair{from_geo, l.from_node_id}, std::pair{to_geo, l.to_node_id}}) {
      if (it == node_geo.end()) {
        std::ostringstream os;
        os << kLinks << " line " << line << ": link " << l.link_id << " references node " << nid
           << " absent from " << kNodes;
        throw Error(ErrorKind::ReferentialError, os.str());
      }
    }

    if (c_geom && !trim(row[*c_geom]).empty()) {
      l.geometry = parse_wkt_linestring(row[*c_geom]);
    } else {
      l.geometry = {from_geo->second, to_geo->second};
    }

    if (c_lanes && !trim(row[*c_lanes]).empty()) {
      auto lanes = to_int(row[*c_lanes]);
      if (!lanes || *lanes < 1) bad_field(kLinks, line, "lanes", row[*c_lanes]);
      l.lanes = static_cast<int>(*lanes);
    }

    if (c_len && !trim(row[*c_len]).empty()) {
      auto len = to_double(row[*c_len]);
      if (!len || *len < 0.0) bad_field(kLinks, line, "length", row[*c_len]);
      l.length_m = *len;
    } else {
      for (std::size_t i = 1; i < l.geometry.size(); ++i) {
        l.length_m += haversine_m(l.geometry[i - 1], l.geometry[i]);
      }
    }
    g.links.push_back(std::move(l));
  }
  return g;
}

NetworkGraph parse_gmns(const fs::path& node_csv, const fs::path& link_csv, const Projection& projection) {
  return parse_gmns_text(read_file(node_csv), read_file(link_csv), projection);
}

}  // namespace roadgen::gmns
