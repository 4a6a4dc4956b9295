#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckg/error.hpp"

namespace ckg {

using VertexId = std::string;
using EdgeId = std::string;
using VertexSet = std::set<VertexId>;

struct Edge {
  EdgeId id;
  VertexId source;
  VertexId range;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite directed multigraph with named vertices and named edges.
///
/// Vertex ids and edge ids live in separate namespaces; each is unique within
/// its namespace. All iteration is in lexicographic id order, which is the
/// canonical order used for matrices and serialization.
class Graph {
 public:
  Graph() = default;

  void add_vertex(const VertexId& v) {
    if (v.empty()) throw PreconditionError("bad-id", "empty vertex id");
    if (!vertices_.insert(v).second)
      throw PreconditionError("duplicate-id", "vertex '" + v + "' already exists");
    out_[v];
    in_[v];
  }

  void add_edge(const EdgeId& e, const VertexId& source, const VertexId& range) {
    if (e.empty()) throw PreconditionError("bad-id", "empty edge id");
    if (edges_.count(e))
      throw PreconditionError("duplicate-id", "edge '" + e + "' already exists");
    require_vertex(source);
    require_vertex(range);
    edges_.emplace(e, Edge{e, source, range});
    sorted_insert(out_[source], e);
    sorted_insert(in_[range], e);
  }

  void remove_edge(const EdgeId& e) {
    const Edge& ed = edge(e);
    sorted_erase(out_[ed.source], e);
    sorted_erase(in_[ed.range], e);
    edges_.erase(e);
  }

  /// Removes `v` together with every edge it emits or receives.
  void remove_vertex(const VertexId& v) {
    require_vertex(v);
    std::vector<EdgeId> incident = out_[v];
    incident.insert(incident.end(), in_[v].begin(), in_[v].end());
    for (const auto& e : incident)
      if (edges_.count(e)) remove_edge(e);
    out_.erase(v);
    in_.erase(v);
    vertices_.erase(v);
  }

  bool has_vertex(const VertexId& v) const { return vertices_.count(v) != 0; }
  bool has_edge(const EdgeId& e) const { return edges_.count(e) != 0; }

  const VertexSet& vertices() const noexcept { return vertices_; }
  const std::map<EdgeId, Edge>& edges() const noexcept { return edges_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }

  std::vector<VertexId> vertex_list() const {
    return {vertices_.begin(), vertices_.end()};
  }

  const Edge& edge(const EdgeId& e) const {
    auto it = edges_.find(e);
    if (it == edges_.end())
      throw PreconditionError("unknown-edge", "no edge '" + e + "'");
    return it->second;
  }

  /// s^{-1}(v), sorted by edge id.
  const std::vector<EdgeId>& out_edges(const VertexId& v) const {
    return lookup(out_, v);
  }
  /// r^{-1}(v), sorted by edge id.
  const std::vector<EdgeId>& in_edges(const VertexId& v) const {
    return lookup(in_, v);
  }

  std::size_t out_degree(const VertexId& v) const { return out_edges(v).size(); }
  std::size_t in_degree(const VertexId& v) const { return in_edges(v).size(); }

  std::size_t loop_count(const VertexId& v) const {
    std::size_t n = 0;
    for (const auto& e : out_edges(v))
      if (edges_.at(e).range == v) ++n;
    return n;
  }

  void require_vertex(const VertexId& v) const {
    if (!has_vertex(v))
      throw PreconditionError("unknown-vertex", "no vertex '" + v + "'");
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  const std::vector<EdgeId>& lookup(const std::map<VertexId, std::vector<EdgeId>>& m,
                                    const VertexId& v) const {
    auto it = m.find(v);
    if (it == m.end())
      throw PreconditionError("unknown-vertex", "no vertex '" + v + "'");
    return it->second;
  }

  static void sorted_insert(std::vector<EdgeId>& xs, const EdgeId& e) {
    xs.insert(std::lower_bound(xs.begin(), xs.end(), e), e);
  }
  static void sorted_erase(std::vector<EdgeId>& xs, const EdgeId& e) {
    auto it = std::lower_bound(xs.begin(), xs.end(), e);
    if (it != xs.end() && *it == e) xs.erase(it);
  }

  VertexSet vertices_;
  std::map<EdgeId, Edge> edges_;
  std::map<VertexId, std::vector<EdgeId>> out_;
  std::map<VertexId, std::vector<EdgeId>> in_;
};

// ---------------------------------------------------------------------------
// Vertex classification

enum class VertexKind { regular, sink, source, isolated };

inline const char* to_string(VertexKind k) {
  switch (k) {
    case VertexKind::regular: return "regular";
    case VertexKind::sink: return "sink";
    case VertexKind::source: return "source";
    case VertexKind::isolated: return "isolated";
  }
  return "?";
}

/// `kind` is the headline class; the flags are independent (a source can also
/// be regular, e.g. the tail of v -> w).
struct VertexClass {
  VertexKind kind;
  bool regular;
  bool sink;
  bool source;

  friend bool operator==(const VertexClass&, const VertexClass&) = default;
};

inline VertexClass classify_vertex(const Graph& g, const VertexId& v) {
  g.require_vertex(v);
  VertexClass c{};
  c.sink = g.out_degree(v) == 0;
  c.source = g.in_degree(v) == 0;
  c.regular = !c.sink;  // finite graphs have no infinite emitters
  if (c.sink && c.source)
    c.kind = VertexKind::isolated;
  else if (c.sink)
    c.kind = VertexKind::sink;
  else if (c.source)
    c.kind = VertexKind::source;
  else
    c.kind = VertexKind::regular;
  return c;
}

inline bool is_regular(const Graph& g, const VertexId& v) { return g.out_degree(v) > 0; }
inline bool is_sink(const Graph& g, const VertexId& v) { return g.out_degree(v) == 0; }
inline bool is_source(const Graph& g, const VertexId& v) { return g.in_degree(v) == 0; }

inline std::vector<VertexId> sinks(const Graph& g) {
  std::vector<VertexId> out;
  for (const auto& v : g.vertices())
    if (is_sink(g, v)) out.push_back(v);
  return out;
}

inline std::vector<VertexId> sources(const Graph& g) {
  std::vector<VertexId> out;
  for (const auto& v : g.vertices())
    if (is_source(g, v)) out.push_back(v);
  return out;
}

inline bool has_self_loop(const Graph& g, const VertexId& v) { return g.loop_count(v) > 0; }

inline bool every_vertex_has_self_loop(const Graph& g) {
  return std::all_of(g.vertices().begin(), g.vertices().end(),
                     [&](const VertexId& v) { return has_self_loop(g, v); });
}

// ---------------------------------------------------------------------------
// Paths

struct Path {
  std::vector<EdgeId> edges;

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

/// Throws unless `p` is a nonempty sequence of composable edges of `g`.
inline void validate_path(const Graph& g, const Path& p) {
  if (p.edges.empty()) throw PreconditionError("invalid-path", "empty path");
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (!g.has_edge(p.edges[i]))
      throw PreconditionError("invalid-path", "unknown edge '" + p.edges[i] + "'");
    if (i > 0 && g.edge(p.edges[i - 1]).range != g.edge(p.edges[i]).source)
      throw PreconditionError("invalid-path", "edges '" + p.edges[i - 1] + "' and '" +
                                                  p.edges[i] + "' do not compose");
  }
}

inline const VertexId& path_source(const Graph& g, const Path& p) {
  return g.edge(p.edges.front()).source;
}
inline const VertexId& path_range(const Graph& g, const Path& p) {
  return g.edge(p.edges.back()).range;
}

inline bool is_cycle(const Graph& g, const Path& p) {
  return path_source(g, p) == path_range(g, p);
}

inline bool is_vertex_simple_cycle(const Graph& g, const Path& p) {
  if (!is_cycle(g, p)) return false;
  VertexSet seen;
  for (const auto& e : p.edges)
    if (!seen.insert(g.edge(e).source).second) return false;
  return true;
}

/// Vertex-simple cycles none of whose vertices emits an edge off the cycle.
/// Each cycle is reported once, rotated to start at its least vertex.
inline std::vector<Path> vertex_simple_cycles_without_exit(const Graph& g) {
  // Without an exit every vertex on the cycle has out-degree exactly 1, so
  // the cycle is the orbit of the unique-successor map.
  std::vector<Path> cycles;
  VertexSet done;
  for (const auto& start : g.vertices()) {
    if (done.count(start) || g.out_degree(start) != 1) continue;
    Path p;
    VertexId cur = start;
    bool closed = false;
    while (true) {
      if (g.out_degree(cur) != 1) break;
      const EdgeId& e = g.out_edges(cur).front();
      p.edges.push_back(e);
      cur = g.edge(e).range;
      if (cur == start) {
        closed = true;
        break;
      }
      if (cur < start || p.edges.size() > g.vertex_count()) break;
    }
    if (!closed) continue;
    for (const auto& e : p.edges) done.insert(g.edge(e).source);
    cycles.push_back(std::move(p));
  }
  return cycles;
}

/// Lexicographically least among the shortest paths from v to w (v != w).
inline std::optional<Path> shortest_path(const Graph& g, const VertexId& from,
                                         const VertexId& to) {
  g.require_vertex(from);
  g.require_vertex(to);
  if (from == to) return std::nullopt;
  // BFS in sorted edge order discovers every vertex along its lexicographically
  // least shortest path.
  const VertexId* target = nullptr;
  std::map<const VertexId*, const EdgeId*, std::less<>> parent;  // keyed by address inside g
  std::vector<const VertexId*> queue{&*g.vertices().find(from)};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const auto& e : g.out_edges(*queue[head])) {
      const VertexId* r = &*g.vertices().find(g.edge(e).range);
      if (*r == from || !parent.emplace(r, &e).second) continue;
      if (*r == to) {
        target = r;
        break;
      }
      queue.push_back(r);
    }
    if (target) break;
  }
  if (!target) return std::nullopt;
  Path p;
  for (const VertexId* cur = target; *cur != from;) {
    const EdgeId& pe = *parent.at(cur);
    p.edges.push_back(pe);
    cur = &*g.vertices().find(g.edge(pe).source);
  }
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

// ---------------------------------------------------------------------------
// Hereditary and saturated sets

inline void require_subset(const Graph& g, const VertexSet& s) {
  for (const auto& v : s) g.require_vertex(v);
}

/// Vertices reachable from `s` by paths of length >= 0.
inline VertexSet hereditary_closure(const Graph& g, const VertexSet& s) {
  require_subset(g, s);
  VertexSet out = s;
  std::vector<VertexId> stack(s.begin(), s.end());
  while (!stack.empty()) {
    VertexId v = std::move(stack.back());
    stack.pop_back();
    for (const auto& e : g.out_edges(v)) {
      const VertexId& r = g.edge(e).range;
      if (out.insert(r).second) stack.push_back(r);
    }
  }
  return out;
}

/// Adds every regular vertex whose edges all land in the set, to a fixed point.
inline VertexSet saturation(const Graph& g, const VertexSet& s) {
  require_subset(g, s);
  VertexSet out = s;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& v : g.vertices()) {
      if (out.count(v) || !is_regular(g, v)) continue;
      const auto& es = g.out_edges(v);
      if (std::all_of(es.begin(), es.end(),
                      [&](const EdgeId& e) { return out.count(g.edge(e).range) != 0; })) {
        out.insert(v);
        changed = true;
      }
    }
  }
  return out;
}

inline bool is_hereditary(const Graph& g, const VertexSet& h) {
  return hereditary_closure(g, h) == h;
}

inline bool is_saturated(const Graph& g, const VertexSet& h) { return saturation(g, h) == h; }

/// Smallest hereditary and saturated set containing `s`.
/// Saturating a hereditary set keeps it hereditary (every added vertex has all
/// of its targets inside already), so one pass of each suffices.
inline VertexSet hereditary_saturated_closure(const Graph& g, const VertexSet& s) {
  return saturation(g, hereditary_closure(g, s));
}

/// The graph (H, s^{-1}(H), r, s) for a hereditary H.
inline Graph restrict_to_hereditary(const Graph& g, const VertexSet& h) {
  require_subset(g, h);
  if (!is_hereditary(g, h))
    throw PreconditionError("not-hereditary", "vertex set is not hereditary");
  Graph out;
  for (const auto& v : h) out.add_vertex(v);
  for (const auto& [id, e] : g.edges())
    if (h.count(e.source)) out.add_edge(id, e.source, e.range);
  return out;
}

/// Subgraph induced by a vertex set: those vertices and every edge between them.
inline Graph induced_subgraph(const Graph& g, const VertexSet& keep) {
  require_subset(g, keep);
  Graph out;
  for (const auto& v : keep) out.add_vertex(v);
  for (const auto& [id, e] : g.edges())
    if (keep.count(e.source) && keep.count(e.range)) out.add_edge(id, e.source, e.range);
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms

struct GraphMorphism {
  std::map<VertexId, VertexId> vertex_map;
  std::map<EdgeId, EdgeId> edge_map;

  friend bool operator==(const GraphMorphism&, const GraphMorphism&) = default;
};

inline bool is_homomorphism(const Graph& from, const Graph& to, const GraphMorphism& f) {
  if (f.vertex_map.size() != from.vertex_count() || f.edge_map.size() != from.edge_count())
    return false;
  for (const auto& v : from.vertices()) {
    auto it = f.vertex_map.find(v);
    if (it == f.vertex_map.end() || !to.has_vertex(it->second)) return false;
  }
  for (const auto& [id, e] : from.edges()) {
    auto it = f.edge_map.find(id);
    if (it == f.edge_map.end() || !to.has_edge(it->second)) return false;
    const Edge& img = to.edge(it->second);
    if (img.source != f.vertex_map.at(e.source) || img.range != f.vertex_map.at(e.range))
      return false;
  }
  return true;
}

/// Injective on vertices and edges, and bijective from s^{-1}(v) onto
/// s^{-1}(f(v)) at every regular v. Throws if `f` is not a homomorphism.
inline bool is_ck_morphism(const Graph& from, const Graph& to, const GraphMorphism& f) {
  if (!is_homomorphism(from, to, f))
    throw PreconditionError("not-homomorphism", "maps do not form a graph homomorphism");
  std::set<VertexId> vimg;
  for (const auto& [_, w] : f.vertex_map)
    if (!vimg.insert(w).second) return false;
  std::set<EdgeId> eimg;
  for (const auto& [_, e] : f.edge_map)
    if (!eimg.insert(e).second) return false;
  // With f^1 injective and compatible with sources, bijectivity onto
  // s^{-1}(f(v)) reduces to equal cardinalities.
  for (const auto& v : from.vertices())
    if (is_regular(from, v) && from.out_degree(v) != to.out_degree(f.vertex_map.at(v)))
      return false;
  return true;
}

inline GraphMorphism identity_morphism(const Graph& g) {
  GraphMorphism f;
  for (const auto& v : g.vertices()) f.vertex_map.emplace(v, v);
  for (const auto& [id, _] : g.edges()) f.edge_map.emplace(id, id);
  return f;
}

/// `second ∘ first`.
inline GraphMorphism compose(const GraphMorphism& first, const GraphMorphism& second) {
  GraphMorphism out;
  for (const auto& [v, w] : first.vertex_map) out.vertex_map.emplace(v, second.vertex_map.at(w));
  for (const auto& [e, f] : first.edge_map) out.edge_map.emplace(e, second.edge_map.at(f));
  return out;
}

inline GraphMorphism invert(const GraphMorphism& f) {
  GraphMorphism out;
  for (const auto& [v, w] : f.vertex_map) out.vertex_map.emplace(w, v);
  for (const auto& [e, x] : f.edge_map) out.edge_map.emplace(x, e);
  return out;
}

namespace detail {

struct IsoSearch {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> count_a, count_b;
  std::vector<std::size_t> order;  // vertices of `a` in assignment order
  std::vector<std::array<std::size_t, 3>> sig_a, sig_b;
  std::vector<std::size_t> map_ab;
  std::vector<bool> used_b;

  bool extend(std::size_t depth) {
    if (depth == n) return true;
    const std::size_t i = order[depth];
    for (std::size_t j = 0; j < n; ++j) {
      if (used_b[j] || sig_a[i] != sig_b[j]) continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const std::size_t k = order[d];
        ok = count_a[i][k] == count_b[j][map_ab[k]] && count_a[k][i] == count_b[map_ab[k]][j];
      }
      if (!ok) continue;
      map_ab[i] = j;
      used_b[j] = true;
      if (extend(depth + 1)) return true;
      used_b[j] = false;
    }
    return false;
  }
};

}  // namespace detail

/// Finds an isomorphism a -> b by backtracking over vertex bijections pruned by
/// (in-degree, out-degree, loop count) and pairwise edge multiplicities.
inline std::optional<GraphMorphism> graph_isomorphic(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
    return std::nullopt;
  const auto va = a.vertex_list();
  const auto vb = b.vertex_list();
  const std::size_t n = va.size();
  auto index = [](const std::vector<VertexId>& vs) {
    std::map<VertexId, std::size_t> m;
    for (std::size_t i = 0; i < vs.size(); ++i) m.emplace(vs[i], i);
    return m;
  };
  const auto ia = index(va);
  const auto ib = index(vb);

  detail::IsoSearch s;
  s.n = n;
  auto counts = [n](const Graph& g, const std::map<VertexId, std::size_t>& idx) {
    std::vector<std::vector<std::size_t>> c(n, std::vector<std::size_t>(n, 0));
    for (const auto& [_, e] : g.edges()) ++c[idx.at(e.source)][idx.at(e.range)];
    return c;
  };
  s.count_a = counts(a, ia);
  s.count_b = counts(b, ib);
  auto sigs = [](const Graph& g, const std::vector<VertexId>& vs) {
    std::vector<std::array<std::size_t, 3>> out;
    for (const auto& v : vs) out.push_back({g.in_degree(v), g.out_degree(v), g.loop_count(v)});
    return out;
  };
  s.sig_a = sigs(a, va);
  s.sig_b = sigs(b, vb);
  {
    auto x = s.sig_a, y = s.sig_b;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return std::nullopt;
  }
  // Assign in BFS order over the underlying undirected graph so that each new
  // vertex is constrained by already-placed neighbours.
  {
    std::vector<bool> placed(n, false);
    for (std::size_t root = 0; root < n; ++root) {
      if (placed[root]) continue;
      std::deque<std::size_t> q{root};
      placed[root] = true;
      while (!q.empty()) {
        std::size_t i = q.front();
        q.pop_front();
        s.order.push_back(i);
        for (std::size_t k = 0; k < n; ++k)
          if (!placed[k] && (s.count_a[i][k] || s.count_a[k][i])) {
            placed[k] = true;
            q.push_back(k);
          }
      }
    }
  }
  s.map_ab.assign(n, 0);
  s.used_b.assign(n, false);
  if (!s.extend(0)) return std::nullopt;

  GraphMorphism f;
  for (std::size_t i = 0; i < n; ++i) f.vertex_map.emplace(va[i], vb[s.map_ab[i]]);
  // Parallel edges between matched endpoints are paired in id order.
  std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> bucket_b;
  for (const auto& [id, e] : b.edges()) bucket_b[{e.source, e.range}].push_back(id);
  std::map<std::pair<VertexId, VertexId>, std::size_t> used;
  for (const auto& [id, e] : a.edges()) {
    std::pair<VertexId, VertexId> key{f.vertex_map.at(e.source), f.vertex_map.at(e.range)};
    f.edge_map.emplace(id, bucket_b.at(key)[used[key]++]);
  }
  return f;
}

}  // namespace ckg
