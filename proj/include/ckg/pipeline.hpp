#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckg/error.hpp"
#include "ckg/graph.hpp"
#include "ckg/ktheory.hpp"
#include "ckg/monoid.hpp"
#include "ckg/moves.hpp"

namespace ckg {

struct Certificate {
  std::string name;
  bool holds = false;
};

struct PipelineResult {
  std::string pipeline;
  Graph output;
  MoveLog log;
  /// Invariants of the graph the output is compared against: the input, or
  /// the restriction E_H for corner realization (see `reference`).
  KInvariants before;
  KInvariants after;
  std::string reference = "input";
  std::vector<Certificate> certificates;
  /// The multiset whose corner the output realizes, where applicable.
  std::optional<VertexMultiset> projection;
};

namespace detail {

inline void certify(PipelineResult& r, std::string name, bool holds) {
  r.certificates.push_back({name, holds});
  if (!holds) throw InternalError(r.pipeline + ": certificate '" + name + "' failed");
}

inline void require_nonempty(const Graph& g) {
  if (g.empty()) throw PreconditionError("empty-graph", "graph has no vertices");
}

inline void require_no_sinks(const Graph& g) {
  const auto s = sinks(g);
  if (!s.empty()) throw PreconditionError("has-sink", "vertex '" + s.front() + "' is a sink");
}

inline void require_no_sources(const Graph& g) {
  const auto s = sources(g);
  if (!s.empty()) throw PreconditionError("has-source", "vertex '" + s.front() + "' is a source");
}

/// Iterated source removal. Returns the surviving vertex set (the core) and
/// the removed vertices in removal order, which is a topological order.
inline std::pair<VertexSet, std::vector<VertexId>> source_core(const Graph& g) {
  Graph cur = g;
  std::vector<VertexId> removed;
  while (true) {
    const auto s = sources(cur);
    if (s.empty()) break;
    for (const auto& v : s) {
      cur.remove_vertex(v);
      removed.push_back(v);
    }
  }
  return {cur.vertices(), removed};
}

inline void append_log(MoveLog& into, const MoveLog& from) {
  into.entries.insert(into.entries.end(), from.entries.begin(), from.entries.end());
}

inline std::map<VertexId, Integer> scaled_unit(const Graph& g, std::int64_t n) {
  std::map<VertexId, Integer> out;
  for (const auto& v : g.vertices()) out.emplace(v, Integer(n));
  return out;
}

}  // namespace detail

/// Rewrites a finite graph without sinks into an isomorphic-algebra graph
/// without sinks or sources: elide the sources onto the core, then absorb the
/// k sources at each core vertex v into a subdivision of length k of the
/// least core edge entering v.
inline PipelineResult normalize_to_ck(const Graph& g) {
  detail::require_nonempty(g);
  detail::require_no_sinks(g);
  PipelineResult r;
  r.pipeline = "normalize";
  r.log = start_log(g);
  r.before = k_invariants(g);

  const auto [core, removed] = detail::source_core(g);
  if (core.empty())
    throw PreconditionError("empty-core", "iterated source removal leaves nothing (graph has no cycle)");

  Graph cur = g;
  if (!removed.empty()) {
    cur = apply_logged(cur, SourceElision{core}, r.log);
    VertexSet pending;
    for (const auto& v : cur.vertices())
      if (!core.count(v)) pending.insert(v);
    for (const auto& v : core) {
      std::vector<VertexId> feeding;
      for (const auto& e : cur.in_edges(v))
        if (pending.count(cur.edge(e).source)) feeding.push_back(cur.edge(e).source);
      if (feeding.empty()) continue;
      for (const auto& s : feeding) {
        cur = apply_logged(cur, RemoveSource{s}, r.log);
        pending.erase(s);
      }
      std::optional<EdgeId> entry;
      for (const auto& e : cur.in_edges(v))
        if (!pending.count(cur.edge(e).source)) {
          entry = e;
          break;
        }
      if (!entry) throw InternalError("core vertex '" + v + "' has no incoming core edge");
      cur = apply_logged(cur, SubdivideEdge{*entry, static_cast<std::int64_t>(feeding.size())}, r.log);
    }
  }
  r.output = std::move(cur);
  r.after = k_invariants(r.output);
  detail::certify(r, "no-sinks", sinks(r.output).empty());
  detail::certify(r, "no-sources", sources(r.output).empty());
  detail::certify(r, "k-groups-preserved", r.before.same_groups(r.after));
  detail::certify(r, "unit-profile-preserved", r.before.unit == r.after.unit);
  return r;
}

namespace detail {

/// Collapses self-loop-free vertices in canonical order until every vertex is
/// the base of a loop. Mass of `m` at a collapsed vertex is expanded first.
inline Graph saturate_loops(Graph g, MoveLog& log, VertexMultiset* m) {
  while (true) {
    std::optional<VertexId> target;
    for (const auto& v : g.vertices())
      if (!has_self_loop(g, v)) {
        target = v;
        break;
      }
    if (!target) return g;
    if (m)
      while ((*m)[*target] > 0) *m = expand_at(g, std::move(*m), *target);
    g = apply_logged(g, Collapse{*target}, log);
  }
}

}  // namespace detail

inline PipelineResult self_loop_saturate(const Graph& g) {
  detail::require_nonempty(g);
  detail::require_no_sinks(g);
  detail::require_no_sources(g);
  PipelineResult r;
  r.pipeline = "self-loop-saturate";
  r.log = start_log(g);
  r.before = k_invariants(g);
  r.output = detail::saturate_loops(g, r.log, nullptr);
  r.after = k_invariants(r.output);
  detail::certify(r, "no-sinks", sinks(r.output).empty());
  detail::certify(r, "no-sources", sources(r.output).empty());
  detail::certify(r, "all-self-loops", every_vertex_has_self_loop(r.output));
  detail::certify(r, "k-groups-preserved", r.before.same_groups(r.after));
  return r;
}

/// The corner of the stabilization cut down by a projection equivalent to
/// sum_u m_u p_u with every m_u >= 1: attach a head of length m_u - 1 at u.
inline PipelineResult realize_full_corner(const Graph& g, const VertexMultiset& m) {
  detail::require_nonempty(g);
  require_support(g, m);
  detail::require_no_sinks(g);
  detail::require_no_sources(g);
  if (!every_vertex_has_self_loop(g))
    throw PreconditionError("missing-self-loop", "some vertex is not the base of a loop");
  std::map<VertexId, std::int64_t> lengths;
  for (const auto& v : g.vertices()) {
    if (m[v] == 0)
      throw PreconditionError("not-full-form", "multiplicity at '" + v + "' is zero");
    lengths.emplace(v, static_cast<std::int64_t>(m[v]) - 1);
  }
  PipelineResult r;
  r.pipeline = "full-corner";
  r.log = start_log(g);
  r.before = k_invariants(g);
  r.projection = m;
  r.output = apply_logged(g, AttachHeads{lengths}, r.log);
  const KGroups kf(r.output);
  const KGroups kg(g);
  r.after = kf.invariants();
  detail::certify(r, "no-sinks", sinks(r.output).empty());
  detail::certify(r, "k-groups-preserved", r.before.same_groups(r.after));
  detail::certify(r, "unit-class-matches", kf.unit_class() == kf.class_of(m.as_integers()));
  detail::certify(r, "unit-profile-matches", r.after.unit == kg.profile(kg.class_of(m.as_integers())));
  return r;
}

/// Realizes the corner cut down by a nonzero projection sum_u m_u p_u of a
/// Cuntz-Krieger graph: restrict to the hereditary saturated closure of the
/// support, normalize, saturate with loops, make every multiplicity positive,
/// and attach heads. The multiset is carried along each stage.
inline PipelineResult realize_corner(const Graph& g, const VertexMultiset& p) {
  detail::require_nonempty(g);
  if (p.empty()) throw PreconditionError("zero-multiset", "projection is zero");
  require_support(g, p);
  detail::require_no_sinks(g);
  detail::require_no_sources(g);

  PipelineResult r;
  r.pipeline = "corner";
  r.reference = "restriction";
  const VertexSet h = hereditary_saturated_closure(g, p.support());
  const Graph restricted = restrict_to_hereditary(g, h);
  r.log = start_log(restricted);
  const KGroups k_restricted(restricted);
  r.before = k_restricted.invariants();
  const UnitProfile target = k_restricted.profile(k_restricted.class_of(p.as_integers()));

  // Push mass off the vertices that normalization removes, in removal order.
  VertexMultiset m = p;
  const auto [core, removed] = detail::source_core(restricted);
  for (const auto& v : removed)
    while (m[v] > 0) m = expand_at(restricted, std::move(m), v);
  detail::certify(r, "class-preserved-by-pushing",
                  k_restricted.class_of(m.as_integers()) == k_restricted.class_of(p.as_integers()));

  PipelineResult normalized = normalize_to_ck(restricted);
  detail::append_log(r.log, normalized.log);
  Graph cur = normalized.output;
  {
    const KGroups k(cur);
    detail::certify(r, "class-profile-after-normalize", k.profile(k.class_of(m.as_integers())) == target);
  }

  cur = detail::saturate_loops(cur, r.log, &m);
  {
    const KGroups k(cur);
    detail::certify(r, "class-profile-after-collapse", k.profile(k.class_of(m.as_integers())) == target);
  }

  const VertexMultiset full = fullness_normalize(cur, m);
  {
    const KGroups k(cur);
    detail::certify(r, "class-preserved-by-fullness",
                    k.class_of(full.as_integers()) == k.class_of(m.as_integers()));
  }

  PipelineResult corner = realize_full_corner(cur, full);
  detail::append_log(r.log, corner.log);
  r.output = std::move(corner.output);
  r.projection = full;
  r.after = k_invariants(r.output);
  detail::certify(r, "no-sinks", sinks(r.output).empty());
  detail::certify(r, "k-groups-preserved", r.before.same_groups(r.after));
  detail::certify(r, "unit-profile-matches", r.after.unit == target);
  return r;
}

/// M_n of the graph algebra: attach a head of length n - 1 at every vertex,
/// so the unit of the output has class n [1].
inline PipelineResult matrix_amplify(const Graph& g, std::int64_t n) {
  if (n <= 0)
    throw PreconditionError("non-positive-length", "amplification must be positive, got " + std::to_string(n));
  detail::require_nonempty(g);
  detail::require_no_sinks(g);
  PipelineResult r;
  r.pipeline = "amplify";
  r.log = start_log(g);
  const KGroups kg(g);
  r.before = kg.invariants();
  r.output = g;
  if (n > 1) {
    std::map<VertexId, std::int64_t> lengths;
    for (const auto& v : g.vertices()) lengths.emplace(v, n - 1);
    r.output = apply_logged(g, AttachHeads{lengths}, r.log);
  }
  const KGroups kf(r.output);
  r.after = kf.invariants();
  detail::certify(r, "no-sinks", sinks(r.output).empty());
  detail::certify(r, "k-groups-preserved", r.before.same_groups(r.after));
  detail::certify(r, "unit-class-matches", kf.unit_class() == kf.class_of(detail::scaled_unit(g, n)));
  detail::certify(r, "unit-profile-matches",
                  r.after.unit == kg.profile(kg.class_of(detail::scaled_unit(g, n))));
  return r;
}

}  // namespace ckg
