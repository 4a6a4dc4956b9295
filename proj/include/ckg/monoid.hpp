#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "ckg/error.hpp"
#include "ckg/graph.hpp"
#include "ckg/int_matrix.hpp"

namespace ckg {

/// Finitely supported vertex multiset, i.e. the class of sum_u m_u p_u.
/// Zero multiplicities are never stored.
class VertexMultiset {
 public:
  using Count = std::uint64_t;

  VertexMultiset() = default;
  VertexMultiset(std::initializer_list<std::pair<const VertexId, Count>> init) {
    for (const auto& [v, k] : init) add(v, k);
  }

  Count operator[](const VertexId& v) const {
    auto it = counts_.find(v);
    return it == counts_.end() ? 0 : it->second;
  }

  void add(const VertexId& v, Count k = 1) {
    if (k) counts_[v] += k;
  }

  void remove(const VertexId& v, Count k = 1) {
    auto it = counts_.find(v);
    if (it == counts_.end() || it->second < k)
      throw PreconditionError("insufficient-mass", "multiset has fewer than " +
                                                       std::to_string(k) + " of '" + v + "'");
    if ((it->second -= k) == 0) counts_.erase(it);
  }

  void add_all(const VertexMultiset& o) {
    for (const auto& [v, k] : o.counts_) add(v, k);
  }

  bool empty() const noexcept { return counts_.empty(); }
  Count mass() const {
    Count s = 0;
    for (const auto& [_, k] : counts_) s += k;
    return s;
  }
  VertexSet support() const {
    VertexSet s;
    for (const auto& [v, _] : counts_) s.insert(v);
    return s;
  }
  const std::map<VertexId, Count>& counts() const noexcept { return counts_; }

  std::map<VertexId, Integer> as_integers() const {
    std::map<VertexId, Integer> out;
    for (const auto& [v, k] : counts_) out.emplace(v, Integer(k));
    return out;
  }

  friend bool operator==(const VertexMultiset&, const VertexMultiset&) = default;
  friend auto operator<=>(const VertexMultiset&, const VertexMultiset&) = default;

 private:
  std::map<VertexId, Count> counts_;
};

/// Literal syntax `v0=2,v1=1`; an id without `=k` counts once. `0` or the
/// empty string is the zero multiset.
inline VertexMultiset parse_multiset(const std::string& text) {
  VertexMultiset m;
  if (text.empty() || text == "0") return m;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) throw ParseError("empty item in multiset literal '" + text + "'");
    const auto eq = item.rfind('=');
    VertexId v = item.substr(0, eq);
    VertexMultiset::Count k = 1;
    if (eq != std::string::npos) {
      const std::string num = item.substr(eq + 1);
      if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad multiplicity in '" + item + "'");
      k = std::stoull(num);
    }
    if (v.empty()) throw ParseError("missing vertex id in '" + item + "'");
    m.add(v, k);
  }
  return m;
}

inline std::string format_multiset(const VertexMultiset& m) {
  if (m.empty()) return "0";
  std::string out;
  for (const auto& [v, k] : m.counts()) out += (out.empty() ? "" : ",") + v + "=" + std::to_string(k);
  return out;
}

inline void require_support(const Graph& g, const VertexMultiset& m) {
  for (const auto& [v, _] : m.counts()) g.require_vertex(v);
}

// ---------------------------------------------------------------------------
// Rewriting

/// {r(e) : e in s^{-1}(v)} as a multiset.
inline VertexMultiset out_targets(const Graph& g, const VertexId& v) {
  VertexMultiset t;
  for (const auto& e : g.out_edges(v)) t.add(g.edge(e).range);
  return t;
}

/// Replaces one unit of a regular vertex v by one unit of r(e) per e in s^{-1}(v).
inline VertexMultiset expand_at(const Graph& g, VertexMultiset m, const VertexId& v) {
  g.require_vertex(v);
  if (!is_regular(g, v)) throw PreconditionError("not-regular", "vertex '" + v + "' is not regular");
  if (m[v] == 0) throw PreconditionError("insufficient-mass", "multiset has no mass at '" + v + "'");
  m.remove(v);
  m.add_all(out_targets(g, v));
  return m;
}

/// Inverse of expand_at: consumes r(s^{-1}(v)) and produces one unit of v.
inline VertexMultiset contract_at(const Graph& g, VertexMultiset m, const VertexId& v) {
  g.require_vertex(v);
  if (!is_regular(g, v)) throw PreconditionError("not-regular", "vertex '" + v + "' is not regular");
  const VertexMultiset targets = out_targets(g, v);
  for (const auto& [u, k] : targets.counts()) m.remove(u, k);
  m.add(v);
  return m;
}

enum class RewriteDirection { expand, contract };

struct RewriteStep {
  RewriteDirection direction;
  VertexId vertex;

  friend bool operator==(const RewriteStep&, const RewriteStep&) = default;
};

using RewriteTrace = std::vector<RewriteStep>;

inline VertexMultiset replay(const Graph& g, VertexMultiset m, const RewriteTrace& trace) {
  for (const auto& s : trace)
    m = s.direction == RewriteDirection::expand ? expand_at(g, std::move(m), s.vertex)
                                                : contract_at(g, std::move(m), s.vertex);
  return m;
}

/// {w:1} + sum_u m_u(v,w) u, telescoped along `path` from v to w (v != w):
/// at every vertex of the path, the edges not taken contribute their ranges.
inline VertexMultiset path_expansion(const Graph& g, const Path& path) {
  validate_path(g, path);
  if (is_cycle(g, path))
    throw PreconditionError("invalid-path", "path must join two distinct vertices");
  VertexMultiset out;
  out.add(path_range(g, path));
  for (const auto& taken : path.edges)
    for (const auto& e : g.out_edges(g.edge(taken).source))
      if (e != taken) out.add(g.edge(e).range);
  return out;
}

/// The |path| expand steps realizing path_expansion from {v:1}.
inline RewriteTrace path_expansion_trace(const Graph& g, const Path& path) {
  validate_path(g, path);
  RewriteTrace t;
  for (const auto& e : path.edges) t.push_back({RewriteDirection::expand, g.edge(e).source});
  return t;
}

/// True iff the hereditary saturated closure of the support is everything.
inline bool is_full(const Graph& g, const VertexMultiset& m) {
  if (m.empty()) throw PreconditionError("zero-multiset", "multiset is zero");
  require_support(g, m);
  return hereditary_saturated_closure(g, m.support()) == g.vertices();
}

struct NormalizedMultiset {
  VertexMultiset result;
  RewriteTrace trace;  // expand steps from the input to `result`
};

/// Rewrites a full multiset into an equivalent one with every multiplicity
/// >= 1, on a finite graph without sinks or sources in which every vertex
/// carries a self-loop. Zero entries are filled in canonical vertex order, each
/// by expanding one unit of the supported vertex with the shortest path to it.
inline NormalizedMultiset fullness_normalize_traced(const Graph& g, const VertexMultiset& n) {
  require_support(g, n);
  if (!sinks(g).empty()) throw PreconditionError("has-sink", "graph has a sink");
  if (!sources(g).empty()) throw PreconditionError("has-source", "graph has a source");
  if (!every_vertex_has_self_loop(g))
    throw PreconditionError("missing-self-loop", "some vertex is not the base of a loop");
  if (!is_full(g, n)) throw PreconditionError("not-full", "multiset is not full");

  NormalizedMultiset out{n, {}};
  for (const auto& w : g.vertices()) {
    if (out.result[w] != 0) continue;
    std::optional<Path> best;
    for (const auto& v : out.result.support()) {
      auto p = shortest_path(g, v, w);
      if (!p) continue;
      if (!best || p->edges.size() < best->edges.size() ||
          (p->edges.size() == best->edges.size() && *p < *best))
        best = std::move(p);
    }
    if (!best) throw InternalError("full multiset does not reach '" + w + "'");
    out.result.remove(path_source(g, *best));
    out.result.add_all(path_expansion(g, *best));
    const auto steps = path_expansion_trace(g, *best);
    out.trace.insert(out.trace.end(), steps.begin(), steps.end());
  }
  return out;
}

inline VertexMultiset fullness_normalize(const Graph& g, const VertexMultiset& n) {
  return fullness_normalize_traced(g, n).result;
}

// ---------------------------------------------------------------------------
// Equivalence oracle

enum class Equivalence { yes, no, unknown };

inline const char* to_string(Equivalence e) {
  switch (e) {
    case Equivalence::yes: return "equivalent";
    case Equivalence::no: return "not equivalent";
    case Equivalence::unknown: return "unknown";
  }
  return "?";
}

struct EquivalenceResult {
  Equivalence verdict = Equivalence::unknown;
  RewriteTrace trace;        // set when verdict == yes
  std::size_t explored = 0;  // states expanded
};

namespace detail {

using State = boost::container::small_vector<std::uint32_t, 8>;

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto x : s) h = (h ^ x) * 0x100000001b3ull;
    return h;
  }
};

constexpr std::uint32_t kRoot = UINT32_MAX;

/// States seen from one end of the search. Lookups scan linearly until the
/// set grows past a few dozen entries, then go through a hash index.
template <class T, std::size_t N>
using Small = boost::container::small_vector<T, N>;

struct Side {
  Small<State, 16> states;
  Small<std::pair<std::uint32_t, std::uint32_t>, 16> parent;  // (state, expanded vertex)
  Small<std::uint32_t, 16> frontier;
  std::unordered_map<State, std::uint32_t, StateHash> index;
  bool pruned = false;

  static constexpr std::size_t kLinear = 32;

  std::optional<std::uint32_t> find(const State& t) const {
    if (states.size() <= kLinear) {
      for (std::uint32_t i = 0; i < states.size(); ++i)
        if (states[i] == t) return i;
      return std::nullopt;
    }
    auto it = index.find(t);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  /// Index of t, and whether it was new.
  std::pair<std::uint32_t, bool> insert(State t, std::uint32_t from, std::uint32_t vertex) {
    if (auto i = find(t)) return {*i, false};
    const auto i = static_cast<std::uint32_t>(states.size());
    states.push_back(std::move(t));
    parent.emplace_back(from, vertex);
    if (states.size() == kLinear + 1)
      for (std::uint32_t j = 0; j < states.size(); ++j) index.emplace(states[j], j);
    else if (states.size() > kLinear + 1)
      index.emplace(states.back(), i);
    return {i, true};
  }
};

}  // namespace detail

/// Decides Murray-von Neumann equivalence of two vertex multisets in the graph
/// monoid by a bidirectional breadth-first search.
///
/// Both ends are expanded only by `expand` moves; two multisets are equal in
/// the monoid iff they have a common expansion, so a meeting state gives a
/// trace (expand steps from `a`, then contract steps down to `b`). States with
/// total mass above max(|a|, |b|) + budget are not explored. "no" is returned
/// only when both closures are exhausted without hitting that cap; exhausting
/// `budget` state expansions yields "unknown".
inline EquivalenceResult mvn_equivalent(const Graph& g, const VertexMultiset& a,
                                        const VertexMultiset& b, std::size_t budget) {
  require_support(g, a);
  require_support(g, b);
  EquivalenceResult res;
  if (a == b) {
    res.verdict = Equivalence::yes;
    return res;
  }
  detail::Small<const VertexId*, 8> vs;
  for (const auto& v : g.vertices()) vs.push_back(&v);
  const std::size_t n = vs.size();
  auto idx = [&](const VertexId& v) {
    return static_cast<std::uint32_t>(
        std::lower_bound(vs.begin(), vs.end(), v, [](const VertexId* x, const VertexId& y) { return *x < y; }) -
        vs.begin());
  };
  // Net effect of expanding at each regular vertex.
  // gain[start[i] .. start[i+1]) lists (target, multiplicity) for vertex i.
  detail::Small<std::uint32_t, 64> count(n * n, 0);
  for (const auto& [_, e] : g.edges()) ++count[idx(e.source) * n + idx(e.range)];
  detail::Small<std::pair<std::uint32_t, std::uint32_t>, 64> gain;
  detail::Small<std::uint32_t, 9> start{0};
  detail::Small<char, 8> useful(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t u = 0; u < n; ++u)
      if (const auto c = count[i * n + u]) gain.emplace_back(u, c);
    start.push_back(static_cast<std::uint32_t>(gain.size()));
    const auto len = start[i + 1] - start[i];
    // Expanding a vertex whose only edge is a self-loop is the identity.
    useful[i] = len > 0 && !(len == 1 && gain[start[i]] == std::pair<std::uint32_t, std::uint32_t>{i, 1});
  }
  auto to_state = [&](const VertexMultiset& m) {
    detail::State s(n, 0);
    for (const auto& [v, k] : m.counts()) s[idx(v)] = static_cast<std::uint32_t>(k);
    return s;
  };
  auto mass = [](const detail::State& s) {
    std::uint64_t t = 0;
    for (auto x : s) t += x;
    return t;
  };
  const std::uint64_t cap = std::max(a.mass(), b.mass()) + budget;

  detail::Side sides[2];
  sides[0].insert(to_state(a), detail::kRoot, 0);
  sides[0].frontier.push_back(0);
  sides[1].insert(to_state(b), detail::kRoot, 0);
  sides[1].frontier.push_back(0);

  auto chain = [&](const detail::Side& side, std::uint32_t i) {
    std::vector<std::uint32_t> out;  // expansions from the side's root to state i
    for (; side.parent[i].first != detail::kRoot; i = side.parent[i].first) out.push_back(side.parent[i].second);
    std::reverse(out.begin(), out.end());
    return out;
  };
  auto finish = [&](std::uint32_t ia, std::uint32_t ib) {
    for (auto v : chain(sides[0], ia)) res.trace.push_back({RewriteDirection::expand, *vs[v]});
    auto back = chain(sides[1], ib);
    for (auto it = back.rbegin(); it != back.rend(); ++it)
      res.trace.push_back({RewriteDirection::contract, *vs[*it]});
    res.verdict = Equivalence::yes;
  };

  while (true) {
    if (sides[0].frontier.empty() && sides[1].frontier.empty()) {
      // Both closures enumerated; every common state would have been seen.
      if (!sides[0].pruned && !sides[1].pruned) res.verdict = Equivalence::no;
      return res;
    }
    int k = 0;
    if (sides[0].frontier.empty() ||
        (!sides[1].frontier.empty() && sides[1].frontier.size() < sides[0].frontier.size()))
      k = 1;
    detail::Side& side = sides[k];
    const detail::Side& other = sides[1 - k];
    detail::Small<std::uint32_t, 16> next;
    for (const std::uint32_t si : side.frontier) {
      if (res.explored >= budget) return res;
      ++res.explored;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (!useful[v] || side.states[si][v] == 0) continue;
        detail::State t = side.states[si];
        --t[v];
        for (auto j = start[v]; j < start[v + 1]; ++j) t[gain[j].first] += gain[j].second;
        if (mass(t) > cap) {
          side.pruned = true;
          continue;
        }
        const auto [ti, inserted] = side.insert(std::move(t), si, v);
        if (!inserted) continue;
        if (const auto oi = other.find(side.states[ti])) {
          k == 0 ? finish(ti, *oi) : finish(*oi, ti);
          return res;
        }
        next.push_back(ti);
      }
    }
    side.frontier = std::move(next);
  }
}

}  // namespace ckg
