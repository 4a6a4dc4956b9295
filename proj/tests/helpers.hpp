#pragma once

#include <set>
#include <sstream>
#include <string>

#include "ckg/graph.hpp"
#include "ckg/graph_io.hpp"

namespace testing_helpers {

inline ckg::Graph fixture(const std::string& name) { return ckg::load_graph(std::string(CKG_FIXTURES) + "/" + name); }

/// Graph from `edge <id> <s> <r>` lines alone; endpoints are declared.
inline ckg::Graph edges(const std::string& text) {
  std::istringstream in(text);
  std::string decl;
  std::set<std::string> vs;
  for (std::string kw, id, s, r; in >> kw >> id >> s >> r;) {
    vs.insert(s);
    vs.insert(r);
  }
  for (const auto& v : vs) decl += "vertex " + v + "\n";
  return ckg::parse_graph(decl + text);
}

/// One vertex v0 with n loops l1..ln.
inline ckg::Graph loops(int n) {
  ckg::Graph g;
  g.add_vertex("v0");
  for (int i = 1; i <= n; ++i) g.add_edge("l" + std::to_string(i), "v0", "v0");
  return g;
}

/// Relabels vertices and edges through a fixed bijection on indices.
inline ckg::Graph relabel(const ckg::Graph& g, const std::string& prefix) {
  ckg::Graph out;
  const auto vs = g.vertex_list();
  std::map<ckg::VertexId, ckg::VertexId> vmap;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    vmap[vs[i]] = prefix + std::to_string(vs.size() - 1 - i);
    out.add_vertex(vmap[vs[i]]);
  }
  std::size_t k = 0;
  for (const auto& [_, e] : g.edges()) out.add_edge(prefix + "e" + std::to_string(k++), vmap[e.source], vmap[e.range]);
  return out;
}

}  // namespace testing_helpers
