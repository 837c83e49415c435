#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "attsim/config.hpp"
#include "attsim/errors.hpp"
#include "attsim/graph.hpp"
#include "attsim/metrics.hpp"

namespace attsim {

inline constexpr const char* kNodesFile = "nodes.csv";
inline constexpr const char* kTiesFile = "ties.csv";

/// Writes `dir/nodes.csv` (node_id,attitude) and `dir/ties.csv` (src,dst,kind).
/// Base rows come first with src < dst; close rows keep their direction.
inline void export_network(const AttitudeNetwork& net, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream nodes(dir / kNodesFile);
  std::ofstream ties(dir / kTiesFile);
  if (!nodes || !ties) throw IoError("cannot write network files under " + dir.string());

  nodes << "node_id,attitude\n";
  for (NodeId v = 0; v < net.node_count(); ++v) {
    nodes << v << ',' << format_double(net.attitude(v)) << '\n';
  }
  ties << "src,dst,kind\n";
  for (const auto& t : net.base_ties()) ties << t.src << ',' << t.dst << ",base\n";
  for (const auto& t : net.close_ties()) ties << t.src << ',' << t.dst << ",close\n";
  if (!nodes || !ties) throw IoError("write failed under " + dir.string());
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

/// Reads a network written by export_network. Close rows may appear anywhere
/// in the tie file but each needs a matching base row somewhere in it.
inline AttitudeNetwork import_network(const std::filesystem::path& dir) {
  const auto nodes_path = (dir / kNodesFile).string();
  const auto ties_path = (dir / kTiesFile).string();
  std::ifstream nodes(nodes_path);
  if (!nodes) throw IoError("cannot open " + nodes_path);
  std::ifstream ties(ties_path);
  if (!ties) throw IoError("cannot open " + ties_path);

  AttitudeNetwork net;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(nodes, line)) {
    ++lineno;
    if (lineno == 1 || trim(line).empty()) continue;
    const auto f = detail::split_csv(line);
    NodeId id = 0;
    double att = 0.0;
    if (f.size() != 2 || !parse_number(f[0], id) || !parse_number(f[1], att)) {
      throw ImportError(nodes_path, lineno, "expected node_id,attitude");
    }
    if (id != net.node_count()) {
      throw ImportError(nodes_path, lineno, "node ids must be dense and in order");
    }
    try {
      net.add_node(att);
    } catch (const DomainError& e) {
      throw ImportError(nodes_path, lineno, e.what());
    }
  }

  struct Row {
    NodeId src, dst;
    bool close;
    std::size_t line;
  };
  std::vector<Row> rows;
  lineno = 0;
  while (std::getline(ties, line)) {
    ++lineno;
    if (lineno == 1 || trim(line).empty()) continue;
    const auto f = detail::split_csv(line);
    Row r{0, 0, false, lineno};
    if (f.size() != 3 || !parse_number(f[0], r.src) || !parse_number(f[1], r.dst) ||
        (f[2] != "base" && f[2] != "close")) {
      throw ImportError(ties_path, lineno, "expected src,dst,kind with kind in {base, close}");
    }
    r.close = f[2] == "close";
    rows.push_back(r);
  }
  for (bool close_pass : {false, true}) {
    for (const auto& r : rows) {
      if (r.close != close_pass) continue;
      try {
        if (r.close) {
          net.add_close_tie(r.src, r.dst);
        } else {
          net.add_base_tie(r.src, r.dst);
        }
      } catch (const Error& e) {
        throw ImportError(ties_path, r.line, e.what());
      }
    }
  }
  return net;
}

inline constexpr const char* kReportHeader = "relation_class,correlation,n_effective";

/// One row per relation class; an undefined correlation is an empty field.
inline void write_report(std::ostream& out, const CorrelationReport& report) {
  out << kReportHeader << '\n';
  for (RelationClass c : kRelationClasses) {
    out << to_string(c) << ',';
    if (report[c].r) out << format_double(*report[c].r);
    out << ',' << report[c].n_effective << '\n';
  }
}

}  // namespace attsim
