#include "roadgen/osm.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cstring>
#include <memory>
#include <sstream>

#include "roadgen/error.hpp"

namespace roadgen::osm {

std::string Way::tag(const std::string& key) const {
  auto it = tags.find(key);
  return it == tags.end() ? std::string{} : it->second;
}

namespace {

struct ParseState {
  OsmDocument doc;
  Way current;
  bool in_way = false;
  std::string error;
  XML_Parser parser = nullptr;
};

const char* attr(const char** attrs, const char* name) {
  for (int i = 0; attrs[i]; i += 2) {
    if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
  }
  return nullptr;
}

template <typename T>
bool parse_number(const char* text, T& out) {
  if (!text) return false;
  const char* end = text + std::strlen(text);
  auto [ptr, ec] = std::from_chars(text, end, out);
  return ec == std::errc{} && ptr == end && ptr != text;
}

void fail(ParseState& st, const std::string& msg) {
  if (st.error.empty()) {
    std::ostringstream os;
    os << "line " << XML_GetCurrentLineNumber(st.parser) << ": " << msg;
    st.error = os.str();
  }
  XML_StopParser(st.parser, XML_FALSE);
}

void on_start(void* data, const char* name, const char** attrs) {
  auto& st = *static_cast<ParseState*>(data);
  if (const char* action = attr(attrs, "action"); action && std::strcmp(action, "delete") == 0) {
    return;
  }
  if (std::strcmp(name, "node") == 0) {
    OsmId id = 0;
    GeoPoint p;
    if (!parse_number(attr(attrs, "id"), id) || !parse_number(attr(attrs, "lat"), p.lat) ||
        !parse_number(attr(attrs, "lon"), p.lon) || !is_valid(p)) {
      fail(st, "node lacks a valid id/lat/lon");
      return;
    }
    st.doc.nodes[id] = p;
  } else if (std::strcmp(name, "way") == 0) {
    st.current = Way{};
    if (!parse_number(attr(attrs, "id"), st.current.id)) {
      fail(st, "way lacks a valid id");
      return;
    }
    st.in_way = true;
  } else if (st.in_way && std::strcmp(name, "nd") == 0) {
    OsmId ref = 0;
    if (!parse_number(attr(attrs, "ref"), ref)) {
      fail(st, "nd lacks a valid ref");
      return;
    }
    st.current.refs.push_back(ref);
  } else if (st.in_way && std::strcmp(name, "tag") == 0) {
    const char* k = attr(attrs, "k");
    const char* v = attr(attrs, "v");
    if (k && v) st.current.tags[k] = v;
  }
}

void on_end(void* data, const char* name) {
  auto& st = *static_cast<ParseState*>(data);
  if (st.in_way && std::strcmp(name, "way") == 0) {
    st.in_way = false;
    if (st.current.refs.size() >= 2) st.doc.ways.push_back(std::move(st.current));
  }
}

}  // namespace

OsmDocument parse_osm(std::string_view xml) {
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr),
                                                                     &XML_ParserFree);
  if (!parser) throw Error(ErrorKind::XmlMalformed, "cannot allocate XML parser");
  ParseState st;
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);

  // Feed in chunks so sizes beyond INT_MAX stay representable.
  constexpr std::size_t kChunk = 1 << 20;
  std::size_t pos = 0;
  do {
    const std::size_t n = std::min(kChunk, xml.size() - pos);
    const bool last = pos + n == xml.size();
    if (XML_Parse(parser.get(), xml.data() + pos, static_cast<int>(n), last) != XML_STATUS_OK) {
      if (!st.error.empty()) throw Error(ErrorKind::XmlMalformed, st.error);
      std::ostringstream os;
      os << "line " << XML_GetCurrentLineNumber(parser.get()) << ": "
         << XML_ErrorString(XML_GetErrorCode(parser.get()));
      throw Error(ErrorKind::XmlMalformed, os.str());
    }
    pos += n;
  } while (pos < xml.size());

  for (const auto& w : st.doc.ways) {
    for (OsmId ref : w.refs) {
      if (!st.doc.nodes.contains(ref)) {
        std::ostringstream os;
        os << "way " << w.id << " references missing node " << ref;
        throw Error(ErrorKind::DanglingRef, os.str());
      }
    }
  }
  return std::move(st.doc);
}

HighwayFilter HighwayFilter::roads() {
  HighwayFilter f;
  for (const char* base : {"motorway", "trunk", "primary", "secondary", "tertiary"}) {
    f.allowed.insert(base);
    f.allowed.insert(std::string(base) + "_link");
  }
  f.allowed.insert("residential");
  f.allowed.insert("unclassified");
  return f;
}

bool HighwayFilter::accepts(const Way& w) const {
  auto it = w.tags.find("highway");
  return it != w.tags.end() && allowed.contains(it->second);
}

Direction way_direction(const Way& w) {
  const std::string v = w.tag("oneway");
  if (v == "yes" || v == "true" || v == "1") return Direction::Forward;
  if (v == "-1" || v == "reverse") return Direction::Backward;
  return Direction::Both;
}

int way_lanes(const Way& w) {
  const std::string v = w.tag("lanes");
  int lanes = 0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  while (begin != end && *begin == ' ') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, lanes);
  if (ec != std::errc{} || ptr == begin || lanes < 1) return kDefaultLanes;
  return lanes;
}

}  // namespace roadgen::osm
