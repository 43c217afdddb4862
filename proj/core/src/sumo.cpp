#include "roadgen/sumo.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "roadgen/error.hpp"
#include "roadgen/gmns.hpp"

extern char** environ;

namespace roadgen::sumo {

namespace fs = std::filesystem;

namespace {

constexpr const char* kXmlDecl = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
  out << text;
  if (!out.flush()) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
}

}  // namespace

SumoPlainFiles export_sumo_plain(const NetworkGraph& g, CoordinateMode mode) {
  if (auto report = validate_graph(g); !report.ok()) {
    throw Error(ErrorKind::InvalidArgument, "refusing to export an invalid graph:\n" + report.summary());
  }
  std::vector<const NodeRecord*> nodes;
  for (const auto& n : g.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(), [](auto* a, auto* b) { return a->node_id < b->node_id; });
  std::vector<const LinkRecord*> links;
  for (const auto& l : g.links) links.push_back(&l);
  std::sort(links.begin(), links.end(), [](auto* a, auto* b) { return a->link_id < b->link_id; });

  using gmns::format_fixed;
  constexpr int kDecimals = gmns::kCoordDecimals;

  SumoPlainFiles out;
  out.nod_xml = kXmlDecl;
  if (nodes.empty()) {
    out.nod_xml += "<nodes/>\n";
  } else {
    out.nod_xml += "<nodes>\n";
    for (const auto* n : nodes) {
      const double x = mode == CoordinateMode::Planar ? n->planar.x : n->geo.lon;
      const double y = mode == CoordinateMode::Planar ? n->planar.y : n->geo.lat;
      out.nod_xml += "    <node id=\"" + std::to_string(n->node_id) + "\" x=\"" +
                     format_fixed(x, kDecimals) + "\" y=\"" + format_fixed(y, kDecimals) + "\"/>\n";
    }
    out.nod_xml += "</nodes>\n";
  }

  out.edg_xml = kXmlDecl;
  if (links.empty()) {
    out.edg_xml += "<edges/>\n";
  } else {
    out.edg_xml += "<edges>\n";
    for (const auto* l : links) {
      out.edg_xml += "    <edge id=\"" + std::to_string(l->link_id) + "\" from=\"" +
                     std::to_string(l->from_node_id) + "\" to=\"" + std::to_string(l->to_node_id) +
                     "\" numLanes=\"" + std::to_string(l->lanes) + "\"/>\n";
    }
    out.edg_xml += "</edges>\n";
  }
  return out;
}

SumoPaths write_sumo_plain(const SumoPlainFiles& files, const fs::path& out_dir, const std::string& stem) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error(ErrorKind::IoFailure, "cannot create directory " + out_dir.string());
  }
  const fs::path dir = fs::absolute(out_dir).lexically_normal();
  SumoPaths paths{dir / (stem + ".nod.xml"), dir / (stem + ".edg.xml")};
  write_text(paths.nod_xml, files.nod_xml);
  write_text(paths.edg_xml, files.edg_xml);
  return paths;
}

std::optional<fs::path> find_executable(const std::string& name) {
  if (name.find('/') != std::string::npos) {
    if (::access(name.c_str(), X_OK) == 0) return fs::path(name);
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  if (!path_env) return std::nullopt;
  std::string_view rest(path_env);
  while (true) {
    const auto colon = rest.find(':');
    std::string dir(rest.substr(0, colon));
    if (dir.empty()) dir = ".";
    const fs::path candidate = fs::path(dir) / name;
    std::error_code ec;
    if (fs::is_regular_file(candidate, ec) && ::access(candidate.c_str(), X_OK) == 0) {
      return candidate;
    }
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

fs::path run_netconvert(const SumoPlainFiles& files, const fs::path& out_dir, const NetconvertOptions& options) {
  std::optional<fs::path> exe;
  if (options.executable) {
    exe = find_executable(options.executable->string());
  } else if (const char* env = std::getenv("ROADGEN_NETCONVERT"); env && *env) {
    exe = find_executable(env);
  } else {
    exe = find_executable("netconvert");
  }
  if (!exe) throw Error(ErrorKind::ToolMissing, "netconvert executable not found");

  const auto plain = write_sumo_plain(files, out_dir, options.stem);
  const fs::path dir = plain.nod_xml.parent_path();
  const fs::path net = dir / (options.stem + ".net.xml");
  const fs::path log = dir / (options.stem + ".netconvert.log");
  std::error_code ec;
  fs::remove(net, ec);

  std::vector<std::string> args = {
      exe->string(),
      "--node-files=" + plain.nod_xml.string(),
      "--edge-files=" + plain.edg_xml.string(),
      "--output-file=" + net.string(),
  };
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, exe->c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw Error(ErrorKind::ToolFailed, "cannot start " + exe->string() + ": " + std::strerror(rc));
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error(ErrorKind::ToolFailed, "waitpid failed");
  }
  const std::string diagnostics = slurp(log);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    std::ostringstream os;
    os << exe->string() << " exited with ";
    if (WIFEXITED(status)) {
      os << "status " << WEXITSTATUS(status);
    } else {
      os << "signal " << WTERMSIG(status);
    }
    os << ":\n" << diagnostics;
    throw Error(ErrorKind::ToolFailed, os.str());
  }
  if (!fs::exists(net)) {
    throw Error(ErrorKind::ToolFailed, "netconvert produced no " + net.string() + ":\n" + diagnostics);
  }
  return net;
}

}  // namespace roadgen::sumo
