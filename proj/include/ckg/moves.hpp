#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "ckg/error.hpp"
#include "ckg/graph.hpp"
#include "ckg/graph_io.hpp"

namespace ckg {

// Generated ids:
//   add_head, star_sources, attach_heads   <vertex>~h<k>   (vertex and its edge)
//   subdivide_edge                         <edge>~s<k>
//   collapse_vertex                        <in-edge>.<out-edge>
//   source_elision                         src:<e1>.<e2>...<en>

namespace detail {

inline bool id_free(const Graph& g, const std::string& id) {
  return !g.has_vertex(id) && !g.has_edge(id);
}

/// `count` ids `<base>~<tag><k>` for the smallest unused k >= 1, free in both
/// the vertex and the edge namespace.
inline std::vector<std::string> fresh_ids(const Graph& g, const std::string& base,
                                          const std::string& tag, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t k = 1; out.size() < count; ++k) {
    std::string id = base + "~" + tag + std::to_string(k);
    if (id_free(g, id)) out.push_back(std::move(id));
  }
  return out;
}

inline void require_positive(std::int64_t n, const char* what) {
  if (n <= 0)
    throw PreconditionError("non-positive-length", std::string(what) + " must be positive, got " +
                                                       std::to_string(n));
}

}  // namespace detail

/// E(v0, n): a line v_n -> ... -> v_1 -> v0 of fresh vertices.
inline Graph add_head(const Graph& g, const VertexId& v0, std::int64_t n) {
  g.require_vertex(v0);
  detail::require_positive(n, "head length");
  Graph out = g;
  const auto ids = detail::fresh_ids(g, v0, "h", static_cast<std::size_t>(n));
  for (const auto& id : ids) out.add_vertex(id);
  for (std::size_t i = 0; i < ids.size(); ++i) out.add_edge(ids[i], ids[i], i == 0 ? v0 : ids[i - 1]);
  return out;
}

/// E(e0, n): e0 is replaced by the path s(e0) -> v_n -> ... -> v_1 -> r(e0).
inline Graph subdivide_edge(const Graph& g, const EdgeId& e0, std::int64_t n) {
  const Edge old = g.edge(e0);
  detail::require_positive(n, "subdivision length");
  Graph out = g;
  out.remove_edge(e0);
  const auto ids = detail::fresh_ids(g, e0, "s", static_cast<std::size_t>(n) + 1);
  const std::size_t len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < len; ++i) out.add_vertex(ids[i]);
  // ids[i] names vertex v_{i+1} and edge e_{i+1}
  out.add_edge(ids[0], ids[0], old.range);
  for (std::size_t i = 1; i < len; ++i) out.add_edge(ids[i], ids[i], ids[i - 1]);
  out.add_edge(ids[len], old.source, ids[len - 1]);
  return out;
}

/// Paths e_1...e_n with s(e_n) outside `h` and r(e_n) in `h`, sorted by id.
/// Requires the complement of `h` to be acyclic.
inline std::vector<Path> crossing_paths(const Graph& g, const VertexSet& h) {
  std::vector<Path> out;
  std::vector<Path> stack;
  for (const auto& [id, e] : g.edges())
    if (!h.count(e.source) && h.count(e.range)) stack.push_back(Path{{id}});
  while (!stack.empty()) {
    Path p = std::move(stack.back());
    stack.pop_back();
    for (const auto& pre : g.in_edges(path_source(g, p))) {
      Path q;
      q.edges.reserve(p.edges.size() + 1);
      q.edges.push_back(pre);
      q.edges.insert(q.edges.end(), p.edges.begin(), p.edges.end());
      stack.push_back(std::move(q));
    }
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string spell_path(const Path& p) {
  std::string s;
  for (const auto& e : p.edges) s += (s.empty() ? "" : ".") + e;
  return s;
}

/// Checks the hypotheses under which E(H) is available; throws a named
/// PreconditionError otherwise.
inline void check_elision_preconditions(const Graph& g, const VertexSet& h) {
  require_subset(g, h);
  if (!is_hereditary(g, h)) throw PreconditionError("not-hereditary", "vertex set is not hereditary");
  VertexSet rest;
  for (const auto& v : g.vertices())
    if (!h.count(v)) rest.insert(v);
  // Kahn's algorithm on the complement (its edges are those with range outside h).
  std::map<VertexId, std::size_t> indeg;
  for (const auto& v : rest) indeg[v] = g.in_degree(v);
  std::vector<VertexId> ready;
  for (const auto& [v, d] : indeg)
    if (d == 0) ready.push_back(v);
  std::size_t removed = 0;
  while (!ready.empty()) {
    VertexId v = ready.back();
    ready.pop_back();
    ++removed;
    for (const auto& e : g.out_edges(v)) {
      const VertexId& r = g.edge(e).range;
      if (rest.count(r) && --indeg[r] == 0) ready.push_back(r);
    }
  }
  if (removed != rest.size())
    throw PreconditionError("complement-cyclic", "the vertices outside the set carry a cycle");
  for (const auto& v : rest) {
    const auto reach = hereditary_closure(g, {v});
    if (std::none_of(reach.begin(), reach.end(), [&](const VertexId& w) { return h.count(w) != 0; }))
      throw PreconditionError("unreachable-vertex", "vertex '" + v + "' has no path into the set");
  }
}

/// E(H): the restriction to H plus one source per crossing path alpha, with a
/// single edge alpha -> r(alpha).
inline Graph source_elision(const Graph& g, const VertexSet& h) {
  check_elision_preconditions(g, h);
  Graph out;
  for (const auto& v : h) out.add_vertex(v);
  for (const auto& [id, e] : g.edges())
    if (h.count(e.source)) out.add_edge(id, e.source, e.range);
  for (const auto& p : crossing_paths(g, h)) {
    const std::string id = "src:" + spell_path(p);
    if (!detail::id_free(out, id))
      throw PreconditionError("id-collision", "generated id '" + id + "' already in use");
    out.add_vertex(id);
    out.add_edge(id, id, path_range(g, p));
  }
  return out;
}

/// E'(v0, n): n fresh sources, each with one edge into v0.
inline Graph star_sources(const Graph& g, const VertexId& v0, std::int64_t n) {
  g.require_vertex(v0);
  detail::require_positive(n, "source count");
  Graph out = g;
  for (const auto& id : detail::fresh_ids(g, v0, "h", static_cast<std::size_t>(n))) {
    out.add_vertex(id);
    out.add_edge(id, id, v0);
  }
  return out;
}

inline Graph remove_source(const Graph& g, const VertexId& v) {
  g.require_vertex(v);
  if (!is_source(g, v)) throw PreconditionError("not-source", "vertex '" + v + "' receives edges");
  Graph out = g;
  out.remove_vertex(v);
  return out;
}

/// Deletes a regular, non-source vertex v without self-loops and adds an edge
/// s(e) -> r(f) for every pair with r(e) = v = s(f).
inline Graph collapse_vertex(const Graph& g, const VertexId& v) {
  g.require_vertex(v);
  if (is_sink(g, v)) throw PreconditionError("not-regular", "vertex '" + v + "' is a sink");
  if (is_source(g, v)) throw PreconditionError("is-source", "vertex '" + v + "' is a source");
  if (has_self_loop(g, v))
    throw PreconditionError("has-self-loop", "vertex '" + v + "' is the base of a loop");
  Graph out = g;
  const auto ins = g.in_edges(v);
  const auto outs = g.out_edges(v);
  out.remove_vertex(v);
  for (const auto& e : ins)
    for (const auto& f : outs) {
      std::string id = e + "." + f;
      for (std::size_t k = 1; !detail::id_free(out, id); ++k) id = e + "." + f + "~c" + std::to_string(k);
      out.add_edge(id, g.edge(e).source, g.edge(f).range);
    }
  return out;
}

/// The corner graph (T, s^{-1}(T)) of the stabilization: a line head of the
/// given length feeding each listed vertex (0 adds nothing).
inline Graph attach_heads(const Graph& g, const std::map<VertexId, std::int64_t>& lengths) {
  for (const auto& [v, n] : lengths) {
    g.require_vertex(v);
    if (n < 0)
      throw PreconditionError("negative-length", "head length at '" + v + "' is negative");
  }
  Graph out = g;
  for (const auto& [v, n] : lengths)
    if (n > 0) out = add_head(out, v, n);
  return out;
}

// ---------------------------------------------------------------------------
// Move values, text form and replay logs

struct AddHead {
  VertexId vertex;
  std::int64_t length;
  friend bool operator==(const AddHead&, const AddHead&) = default;
};
struct SubdivideEdge {
  EdgeId edge;
  std::int64_t length;
  friend bool operator==(const SubdivideEdge&, const SubdivideEdge&) = default;
};
struct SourceElision {
  VertexSet hereditary;
  friend bool operator==(const SourceElision&, const SourceElision&) = default;
};
struct StarSources {
  VertexId vertex;
  std::int64_t count;
  friend bool operator==(const StarSources&, const StarSources&) = default;
};
struct RemoveSource {
  VertexId vertex;
  friend bool operator==(const RemoveSource&, const RemoveSource&) = default;
};
struct Collapse {
  VertexId vertex;
  friend bool operator==(const Collapse&, const Collapse&) = default;
};
struct AttachHeads {
  std::map<VertexId, std::int64_t> lengths;
  friend bool operator==(const AttachHeads&, const AttachHeads&) = default;
};

using Move =
    std::variant<AddHead, SubdivideEdge, SourceElision, StarSources, RemoveSource, Collapse, AttachHeads>;

inline Graph apply_move(const Graph& g, const Move& m) {
  return std::visit(
      [&](const auto& mv) -> Graph {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, AddHead>) return add_head(g, mv.vertex, mv.length);
        else if constexpr (std::is_same_v<T, SubdivideEdge>) return subdivide_edge(g, mv.edge, mv.length);
        else if constexpr (std::is_same_v<T, SourceElision>) return source_elision(g, mv.hereditary);
        else if constexpr (std::is_same_v<T, StarSources>) return star_sources(g, mv.vertex, mv.count);
        else if constexpr (std::is_same_v<T, RemoveSource>) return remove_source(g, mv.vertex);
        else if constexpr (std::is_same_v<T, Collapse>) return collapse_vertex(g, mv.vertex);
        else return attach_heads(g, mv.lengths);
      },
      m);
}

inline std::string format_move(const Move& m) {
  return std::visit(
      [](const auto& mv) -> std::string {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, AddHead>)
          return "add-head:" + mv.vertex + ":" + std::to_string(mv.length);
        else if constexpr (std::is_same_v<T, SubdivideEdge>)
          return "subdivide:" + mv.edge + ":" + std::to_string(mv.length);
        else if constexpr (std::is_same_v<T, SourceElision>) {
          std::string s = "elide-sources:";
          bool first = true;
          for (const auto& v : mv.hereditary) {
            s += (first ? "" : ",") + v;
            first = false;
          }
          return s;
        } else if constexpr (std::is_same_v<T, StarSources>)
          return "star-sources:" + mv.vertex + ":" + std::to_string(mv.count);
        else if constexpr (std::is_same_v<T, RemoveSource>)
          return "remove-source:" + mv.vertex;
        else if constexpr (std::is_same_v<T, Collapse>)
          return "collapse:" + mv.vertex;
        else {
          std::string s = "attach-heads:";
          bool first = true;
          for (const auto& [v, n] : mv.lengths) {
            s += (first ? "" : ",") + v + "=" + std::to_string(n);
            first = false;
          }
          return s;
        }
      },
      m);
}

namespace detail {

inline std::int64_t parse_int(const std::string& s, const std::string& ctx) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected an integer in '" + ctx + "'");
  }
  if (pos != s.size()) throw ParseError("expected an integer in '" + ctx + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string item; std::getline(in, item, sep);) out.push_back(item);
  return out;
}

}  // namespace detail

/// Parses `<name>:<args>`; ids may themselves contain ':'.
inline Move parse_move(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon + 1 >= text.size())
    throw ParseError("move '" + text + "' is not of the form <name>:<args>");
  const std::string name = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  auto id_and_count = [&]() {
    const auto last = rest.rfind(':');
    if (last == std::string::npos || last == 0)
      throw ParseError("move '" + text + "' needs <id>:<n>");
    return std::pair{rest.substr(0, last), detail::parse_int(rest.substr(last + 1), text)};
  };
  if (name == "add-head") {
    auto [id, n] = id_and_count();
    return AddHead{id, n};
  }
  if (name == "subdivide") {
    auto [id, n] = id_and_count();
    return SubdivideEdge{id, n};
  }
  if (name == "star-sources") {
    auto [id, n] = id_and_count();
    return StarSources{id, n};
  }
  if (name == "remove-source") return RemoveSource{rest};
  if (name == "collapse") return Collapse{rest};
  if (name == "elide-sources") {
    SourceElision m;
    for (auto& v : detail::split(rest, ',')) {
      if (v.empty()) throw ParseError("empty vertex id in '" + text + "'");
      m.hereditary.insert(v);
    }
    return m;
  }
  if (name == "attach-heads") {
    AttachHeads m;
    for (auto& item : detail::split(rest, ',')) {
      const auto eq = item.rfind('=');
      if (eq == std::string::npos || eq == 0) throw ParseError("expected <id>=<n> in '" + text + "'");
      m.lengths[item.substr(0, eq)] = detail::parse_int(item.substr(eq + 1), text);
    }
    return m;
  }
  throw ParseError("unknown move '" + name + "'");
}

struct MoveLogEntry {
  Move move;
  std::string fingerprint;  // of the graph after the move
};

/// Ordered record of applied moves; replaying from a graph with
/// `initial_fingerprint` must reproduce every recorded fingerprint.
struct MoveLog {
  std::string initial_fingerprint;
  std::vector<MoveLogEntry> entries;
};

inline MoveLog start_log(const Graph& g) { return MoveLog{fingerprint(g), {}}; }

inline Graph apply_logged(const Graph& g, const Move& m, MoveLog& log) {
  Graph out = apply_move(g, m);
  log.entries.push_back({m, fingerprint(out)});
  return out;
}

inline Graph replay_log(const Graph& g, const MoveLog& log) {
  if (fingerprint(g) != log.initial_fingerprint)
    throw PreconditionError("replay-mismatch", "initial graph does not match the log");
  Graph cur = g;
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    cur = apply_move(cur, log.entries[i].move);
    if (fingerprint(cur) != log.entries[i].fingerprint)
      throw PreconditionError("replay-mismatch",
                              "fingerprint differs after step " + std::to_string(i + 1));
  }
  return cur;
}

inline std::string serialize_log(const MoveLog& log) {
  std::string out = "start " + log.initial_fingerprint + "\n";
  for (const auto& e : log.entries) out += format_move(e.move) + " " + e.fingerprint + "\n";
  return out;
}

inline MoveLog parse_log(std::istream& in) {
  MoveLog log;
  std::string line;
  bool started = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra))
      throw ParseError("log line " + std::to_string(lineno) + ": expected two fields");
    if (!started) {
      if (a != "start") throw ParseError("log must begin with 'start <fingerprint>'");
      log.initial_fingerprint = b;
      started = true;
    } else {
      log.entries.push_back({parse_move(a), b});
    }
  }
  if (!started) throw ParseError("empty move log");
  return log;
}

inline MoveLog parse_log(const std::string& text) {
  std::istringstream in(text);
  return parse_log(in);
}

}  // namespace ckg
