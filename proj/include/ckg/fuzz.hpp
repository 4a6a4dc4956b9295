#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckg/graph.hpp"
#include "ckg/graph_io.hpp"
#include "ckg/ktheory.hpp"
#include "ckg/moves.hpp"
#include "ckg/random.hpp"

namespace ckg {

struct FuzzFailure {
  std::string check;
  std::string detail;
  std::string graph;  // serialized counterexample
};

struct FuzzReport {
  std::size_t graphs = 0;
  std::size_t checks = 0;
  std::vector<FuzzFailure> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

inline void expect(FuzzReport& rep, bool cond, const std::string& check, const std::string& detail,
                   const Graph& g) {
  ++rep.checks;
  if (!cond) rep.failures.push_back({check, detail, serialize_graph(g)});
}

inline std::vector<VertexId> collapsible(const Graph& g) {
  std::vector<VertexId> out;
  for (const auto& v : g.vertices())
    if (is_regular(g, v) && !is_source(g, v) && !has_self_loop(g, v)) out.push_back(v);
  return out;
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[rng.below(xs.size())];
}

}  // namespace detail

/// Random finite graphs: rank K0 = rank K1 exactly when there is no sink.
inline FuzzReport fuzz_ck_decision(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  FuzzReport rep;
  RandomGraphOptions opt;
  for (std::size_t i = 0; i < count; ++i) {
    const Graph g = random_graph(rng, opt);
    ++rep.graphs;
    const KGroups k(g);
    const bool no_sinks = sinks(g).empty();
    detail::expect(rep, (k.k0_rank() == k.k1_rank()) == no_sinks, "ck-decision",
                   "rank K0 = " + std::to_string(k.k0_rank()) + ", rank K1 = " + std::to_string(k.k1_rank()),
                   g);
    detail::expect(rep, k.k0_rank() - k.k1_rank() == sinks(g).size(), "rank-gap",
                   "rank K0 - rank K1 differs from the number of sinks", g);
  }
  return rep;
}

/// Applies every applicable move to random graphs without sinks and checks
/// that the K-groups survive; for the moves that preserve the algebra up to
/// isomorphism the unit profile is compared as well.
inline FuzzReport fuzz_moves(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  FuzzReport rep;
  RandomGraphOptions opt;
  opt.no_sinks = true;
  for (std::size_t i = 0; i < count; ++i) {
    const Graph g = random_graph(rng, opt);
    ++rep.graphs;
    const KInvariants base = k_invariants(g);
    auto groups = [&](const Graph& h, const std::string& what) {
      detail::expect(rep, k_invariants(h).same_groups(base), what, "K-groups changed", g);
    };
    const auto vs = g.vertex_list();
    std::vector<EdgeId> es;
    for (const auto& [id, _] : g.edges()) es.push_back(id);

    const VertexId v0 = detail::pick(rng, vs);
    const auto n = rng.between(1, 3);
    const Graph headed = add_head(g, v0, n);
    groups(headed, "add-head");
    const KInvariants headed_k = k_invariants(headed);

    const Graph starred = star_sources(g, v0, n);
    groups(starred, "star-sources");
    detail::expect(rep, k_invariants(starred).unit == headed_k.unit, "star-sources-unit",
                   "unit profile differs from add-head", g);

    const EdgeId e0 = detail::pick(rng, es);
    const Graph subdivided = subdivide_edge(g, e0, n);
    groups(subdivided, "subdivide");
    detail::expect(rep, k_invariants(subdivided).unit == k_invariants(add_head(g, g.edge(e0).range, n)).unit,
                   "subdivide-unit", "unit profile differs from add-head at the range", g);

    // Elide onto the core and onto the closure of a random vertex.
    std::vector<VertexSet> candidates;
    {
      Graph cur = g;
      while (!sources(cur).empty())
        for (const auto& s : sources(cur)) cur.remove_vertex(s);
      candidates.push_back(cur.vertices());
      candidates.push_back(hereditary_closure(g, {detail::pick(rng, vs)}));
    }
    for (const auto& h : candidates) {
      Graph elided;
      try {
        elided = source_elision(g, h);
      } catch (const PreconditionError&) {
        continue;
      }
      groups(elided, "source-elision");
      detail::expect(rep, k_invariants(elided).unit == base.unit, "source-elision-unit",
                     "unit profile changed", g);
    }

    for (const auto& s : sources(g)) groups(remove_source(g, s), "remove-source");
    for (const auto& v : detail::collapsible(g)) groups(collapse_vertex(g, v), "collapse");

    std::map<VertexId, std::int64_t> lengths;
    for (const auto& v : vs) lengths[v] = rng.between(0, 2);
    groups(attach_heads(g, lengths), "attach-heads");
  }
  return rep;
}

}  // namespace ckg
