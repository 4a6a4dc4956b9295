#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "ckg/error.hpp"
#include "ckg/graph.hpp"

namespace ckg {

// Line-oriented graph text format:
//
//   # comment
//   vertex <id>
//   edge <id> <source-id> <range-id>
//
// Edges may reference vertices declared later in the file.

inline Graph parse_graph(std::istream& in) {
  struct PendingEdge {
    std::size_t line;
    std::string id, source, range;
  };
  Graph g;
  std::vector<PendingEdge> pending;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(std::move(t));
    if (tok.empty()) continue;
    if (tok[0] == "vertex") {
      if (tok.size() != 2) fail("expected 'vertex <id>'");
      if (g.has_vertex(tok[1])) fail("duplicate vertex '" + tok[1] + "'");
      g.add_vertex(tok[1]);
    } else if (tok[0] == "edge") {
      if (tok.size() != 4) fail("expected 'edge <id> <source> <range>'");
      pending.push_back({lineno, tok[1], tok[2], tok[3]});
    } else {
      fail("unknown declaration '" + tok[0] + "'");
    }
  }
  for (const auto& e : pending) {
    lineno = e.line;
    if (g.has_edge(e.id)) fail("duplicate edge '" + e.id + "'");
    if (!g.has_vertex(e.source)) fail("edge '" + e.id + "' uses undeclared vertex '" + e.source + "'");
    if (!g.has_vertex(e.range)) fail("edge '" + e.id + "' uses undeclared vertex '" + e.range + "'");
    g.add_edge(e.id, e.source, e.range);
  }
  return g;
}

inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_graph(in);
}

/// Canonical text: vertices then edges, each in lexicographic id order.
inline std::string serialize_graph(const Graph& g) {
  std::string out;
  for (const auto& v : g.vertices()) out += "vertex " + v + "\n";
  for (const auto& [id, e] : g.edges()) out += "edge " + id + " " + e.source + " " + e.range + "\n";
  return out;
}

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
inline std::string fingerprint(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize_graph(g)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ckg
