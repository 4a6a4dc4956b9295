// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ckg/fuzz.hpp"
#include "ckg/int_matrix.hpp"
#include "ckg/ktheory.hpp"
#include "ckg/monoid.hpp"
#include "ckg/moves.hpp"
#include "ckg/pipeline.hpp"
#include "ckg/random.hpp"
#include "golden_cases.hpp"
#include "oracles.hpp"

using namespace ckg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_s) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("time limit ") + std::to_string(limit_s) + " s exceeded";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

Graph load(const std::string& name) { return load_graph(std::string(CKG_FIXTURES) + "/" + name); }

Graph loops(int n) {
  Graph g;
  g.add_vertex("v0");
  for (int i = 1; i <= n; ++i) g.add_edge("l" + std::to_string(i), "v0", "v0");
  return g;
}

/// Every directed multigraph on n vertices with at most `maxmult` parallel
/// edges per ordered pair, one per isomorphism class: a multiplicity matrix
/// is visited iff no vertex permutation makes it lexicographically smaller.
void for_each_graph(std::size_t n, int maxmult, const std::function<void(const Graph&)>& visit) {
  const std::size_t cells = n * n;
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  // Cell index of (p[i], p[j]) for cell (i, j), per permutation.
  std::vector<std::vector<std::size_t>> moved;
  for (const auto& q : perms) {
    std::vector<std::size_t> m(cells);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i * n + j] = q[i] * n + q[j];
    moved.push_back(std::move(m));
  }
  std::vector<std::string> vname, ename;
  for (std::size_t i = 0; i < n; ++i) vname.push_back("v" + std::to_string(i));
  for (std::size_t c = 0; c < cells; ++c)
    for (int k = 0; k < maxmult; ++k)
      ename.push_back("e" + std::to_string(c / n) + std::to_string(c % n) + "_" + std::to_string(k));
  std::vector<int> d(cells, 0);
  while (true) {
    bool canonical = true;
    for (std::size_t k = 1; k < moved.size() && canonical; ++k) {
      const auto& m = moved[k];
      for (std::size_t c = 0; c < cells; ++c) {
        const int x = d[m[c]];
        if (x != d[c]) {
          if (x < d[c]) canonical = false;
          break;
        }
      }
    }
    if (canonical) {
      Graph g;
      for (const auto& v : vname) g.add_vertex(v);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (int k = 0; k < d[i * n + j]; ++k) g.add_edge(ename[(i * n + j) * maxmult + k], vname[i], vname[j]);
      visit(g);
    }
    std::size_t c = cells;
    while (c > 0 && d[c - 1] == maxmult) d[--c] = 0;
    if (c == 0) return;
    ++d[c - 1];
  }
}

Outcome c1_worked_example() {
  const Graph e = load("example-E.graph");
  const Graph elided = source_elision(add_head(e, "v0", 2), {"v0"});
  const Graph star = star_sources(e, "v0", 2);
  if (!graph_isomorphic(elided, star)) return {false, "E(v0,2)({v0}) not isomorphic to E'(v0,2)"};
  if (!graph_isomorphic(elided, load("star-v0-2.graph"))) return {false, "does not match the E'(v0,2) figure"};
  // With the fixture edge names the sources are the paths e1 and e2 e1.
  if (serialize_graph(source_elision(load("head-v0-2.graph"), {"v0"})) !=
      "vertex src:e1\nvertex src:e2.e1\nvertex v0\n"
      "edge e0 v0 v0\nedge f v0 v0\nedge src:e1 src:e1 v0\nedge src:e2.e1 src:e2.e1 v0\n")
    return {false, "sources of E(v0,2)({v0}) are not e1 and e2e1"};
  return {true, ""};
}

Outcome c2_phantom() {
  const auto rep = fuzz_ck_decision(20240601, 1000);
  if (!rep.ok()) return {false, rep.failures[0].check + ": " + rep.failures[0].detail};
  return {true, std::to_string(rep.graphs) + " graphs"};
}

Outcome c3_moves() {
  const auto rep = fuzz_moves(20240602, 500);
  if (!rep.ok()) return {false, rep.failures[0].check + ": " + rep.failures[0].detail + "\n" + rep.failures[0].graph};
  return {true, std::to_string(rep.graphs) + " graphs, " + std::to_string(rep.checks) + " checks"};
}

Outcome c4_snf() {
  Rng rng(20240603);
  std::size_t cross = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto m = static_cast<std::size_t>(rng.between(1, 8)), n = static_cast<std::size_t>(rng.between(1, 8));
    IntMatrix a(m, n);
    oracle::Mat ref(m, std::vector<long long>(n));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ref[i][j] = rng.between(-9, 9);
        a(i, j) = ref[i][j];
      }
    const auto r = smith_normal_form(a);
    if (!verify_snf(a, r)) return {false, "certificate failed for\n" + format_matrix(a)};
    if (m <= 4 && n <= 4) {
      ++cross;
      std::vector<long long> d;
      for (const auto& x : r.diagonal()) d.push_back(x.convert_to<long long>());
      if (d != oracle::invariant_factors(ref)) return {false, "minors oracle disagrees on\n" + format_matrix(a)};
    }
  }
  return {true, "1000 matrices, " + std::to_string(cross) + " cross-checked"};
}

Outcome c5_monoid() {
  std::size_t graphs = 0, path_checks = 0, full_checks = 0;
  std::string bad;
  for (std::size_t n = 1; n <= 4 && bad.empty(); ++n)
    for_each_graph(n, 2, [&](const Graph& g) {
      if (!bad.empty()) return;
      ++graphs;
      const auto vs = g.vertex_list();
      for (const auto& v : vs)
        for (const auto& w : vs) {
          if (v == w) continue;
          const auto p = shortest_path(g, v, w);
          if (!p) continue;
          ++path_checks;
          const auto r = mvn_equivalent(g, VertexMultiset{{v, 1}}, path_expansion(g, *p), 10000);
          if (r.verdict != Equivalence::yes) {
            bad = "path_expansion " + v + "->" + w + " " + to_string(r.verdict) + "\n" + serialize_graph(g);
            return;
          }
        }
      if (!sinks(g).empty() || !sources(g).empty() || !every_vertex_has_self_loop(g)) return;
      for (const auto& v : vs) {
        const VertexMultiset unit{{v, 1}};
        if (!is_full(g, unit)) continue;
        ++full_checks;
        const auto r = mvn_equivalent(g, unit, fullness_normalize(g, unit), 10000);
        if (r.verdict != Equivalence::yes) {
          bad = "fullness_normalize at " + v + " " + to_string(r.verdict) + "\n" + serialize_graph(g);
          return;
        }
      }
    });
  if (!bad.empty()) return {false, bad};
  return {true, std::to_string(graphs) + " graphs up to isomorphism, " + std::to_string(path_checks) +
                    " path expansions, " + std::to_string(full_checks) + " fullness normalizations"};
}

Outcome c6_pipelines() {
  Rng rng(20240606);
  RandomGraphOptions ns;
  ns.no_sinks = true;
  for (int t = 0; t < 200; ++t) {
    const Graph g = random_graph(rng, ns);
    const auto once = normalize_to_ck(g).output;
    if (!graph_isomorphic(normalize_to_ck(once).output, once))
      return {false, "normalize not idempotent on\n" + serialize_graph(g)};
  }
  RandomGraphOptions loops_opt;
  loops_opt.all_self_loops = true;
  for (int t = 0; t < 200; ++t) {
    const Graph g = random_graph(rng, loops_opt);
    VertexMultiset m;
    for (const auto& v : g.vertices()) m.add(v, rng.between(1, 4));
    const auto r = realize_full_corner(g, m);
    const KGroups kf(r.output), kg(g);
    if (!verify_snf(kf.relations(), kf.snf())) return {false, "SNF certificate failed"};
    if (kf.unit_class() != kf.class_of(m.as_integers()))
      return {false, "unit class differs from the image of m on\n" + serialize_graph(g)};
    if (kf.invariants().unit != kg.profile(kg.class_of(m.as_integers())))
      return {false, "unit profile differs from the class of m in K0(g)"};
  }
  return {true, "200 + 200 graphs"};
}

Outcome c7_loops() {
  // Oracle values first, from determinantal divisors of the 1x1 matrix [n - 1].
  std::vector<oracle::KRef> expected;
  for (int n = 1; n <= 12; ++n) expected.push_back(oracle::k_groups(loops(n)));
  for (int n = 1; n <= 12; ++n) {
    const auto& ref = expected[static_cast<std::size_t>(n - 1)];
    const bool shape = n == 1 ? (ref.torsion.empty() && ref.k0_rank == 1 && ref.k1_rank == 1)
                              : (ref.k0_rank == 0 && ref.k1_rank == 0 &&
                                 ref.torsion == (n == 2 ? std::vector<long long>{} : std::vector<long long>{n - 1}));
    if (!shape) return {false, "oracle gives an unexpected shape for n = " + std::to_string(n)};
    const auto k = k_invariants(loops(n));
    std::vector<long long> t;
    for (const auto& d : k.k0_torsion) t.push_back(d.convert_to<long long>());
    if (t != ref.torsion || k.k0_rank != ref.k0_rank || k.k1_rank != ref.k1_rank)
      return {false, "mismatch at n = " + std::to_string(n)};
  }
  return {true, "n = 1..12"};
}

Outcome c8_golden() {
  std::size_t n = 0;
  for (const auto& c : golden::cases()) {
    const auto r = golden::run(c.args, CKG_FIXTURES);
    std::string expected;
    if (!golden::read(golden::path(CKG_GOLDEN, c), expected)) return {false, "missing golden " + c.name};
    if (r.status != 0 || r.out != expected) return {false, "differs: " + c.name};
    if (golden::run(c.args, CKG_FIXTURES).out != r.out) return {false, "nondeterministic: " + c.name};
    if (c.name.size() > 5 && c.name.substr(c.name.size() - 5) == ".json") {
      const auto j = Json::parse(r.out);
      std::vector<std::string> keys;
      for (const auto& [k, _] : j.items()) keys.push_back(k);
      if (keys != std::vector<std::string>{"command", "graph", "output", "invariants", "moves", "certificates",
                                           "verdicts"})
        return {false, "JSON keys changed: " + c.name};
    }
    ++n;
  }
  return {true, std::to_string(n) + " golden reports"};
}

}  // namespace

int main() {
  criterion(1, "worked-example-regression", 1, c1_worked_example);
  criterion(2, "phantom-ck-equivalence-fuzz", 30, c2_phantom);
  criterion(3, "move-invariance-fuzz", 60, c3_moves);
  criterion(4, "snf-certification", 30, c4_snf);
  criterion(5, "monoid-oracle-agreement", 120, c5_monoid);
  criterion(6, "pipeline-idempotence-and-corner-unit-class", 60, c6_pipelines);
  criterion(7, "known-algebra-spot-checks", 10, c7_loops);
  criterion(8, "cli-golden-files", 10, c8_golden);
  return failures == 0 ? 0 : 1;
}
