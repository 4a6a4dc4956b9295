#include <gtest/gtest.h>

#include "ckg/pipeline.hpp"
#include "helpers.hpp"

using namespace ckg;
using testing_helpers::fixture;
using testing_helpers::loops;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const PreconditionError& e) {
    return e.code();
  }
  return "none";
}

bool iso(const Graph& a, const Graph& b) { return graph_isomorphic(a, b).has_value(); }

bool all_hold(const PipelineResult& r) {
  for (const auto& c : r.certificates)
    if (!c.holds) return false;
  return !r.certificates.empty();
}

}  // namespace

TEST(Normalize, HeadBecomesSubdivision) {
  const auto r = normalize_to_ck(fixture("head-v0-2.graph"));
  EXPECT_TRUE(iso(r.output, fixture("ev02.graph")));
  EXPECT_TRUE(all_hold(r));
  EXPECT_EQ(r.log.entries.size(), 4u);
  EXPECT_EQ(replay_log(fixture("head-v0-2.graph"), r.log), r.output);
}

TEST(Normalize, AlreadyNormalIsUnchanged) {
  const Graph g = fixture("ev02.graph");
  const auto r = normalize_to_ck(g);
  EXPECT_EQ(r.output, g);
  EXPECT_TRUE(r.log.entries.empty());
}

TEST(Normalize, StarMatchesHead) {
  EXPECT_TRUE(iso(normalize_to_ck(fixture("star-v0-2.graph")).output,
                  normalize_to_ck(fixture("head-v0-2.graph")).output));
}

TEST(Normalize, Refusals) {
  EXPECT_EQ(code_of([] { normalize_to_ck(testing_helpers::edges("edge e v w\n")); }), "has-sink");
  EXPECT_EQ(code_of([] { normalize_to_ck(Graph{}); }), "empty-graph");
}

TEST(Normalize, BranchedSourceTree) {
  // Two levels of sources feeding two different core vertices.
  const Graph g = testing_helpers::edges(
      "edge a u v\nedge b v u\nedge la u u\n"
      "edge s1 x u\nedge s2 y x\nedge s3 y v\nedge s4 z v\n");
  const auto r = normalize_to_ck(g);
  EXPECT_TRUE(all_hold(r));
  EXPECT_TRUE(sources(r.output).empty());
}

TEST(SelfLoopSaturate, Examples) {
  const auto two = self_loop_saturate(testing_helpers::edges("edge a u v\nedge b v u\n"));
  EXPECT_TRUE(iso(two.output, loops(1)));
  const auto three = self_loop_saturate(testing_helpers::edges("edge a x y\nedge b y z\nedge c z x\n"));
  EXPECT_TRUE(iso(three.output, loops(1)));
  EXPECT_EQ(three.log.entries.size(), 2u);
  const Graph e = fixture("example-E.graph");
  EXPECT_EQ(self_loop_saturate(e).output, e);
  EXPECT_EQ(code_of([] { self_loop_saturate(fixture("head-v0-2.graph")); }), "has-source");
}

TEST(FullCorner, Examples) {
  const Graph e = fixture("example-E.graph");
  EXPECT_EQ(realize_full_corner(e, VertexMultiset{{"v0", 1}}).output, e);
  const auto three = realize_full_corner(e, VertexMultiset{{"v0", 3}});
  EXPECT_TRUE(iso(three.output, fixture("head-v0-2.graph")));
  EXPECT_EQ(three.after.k0_rank, 0u);
  EXPECT_TRUE(three.after.k0_torsion.empty());

  const Graph uv = testing_helpers::edges("edge lu u u\nedge lv v v\nedge e u v\nedge f v u\n");
  const auto r = realize_full_corner(uv, VertexMultiset{{"u", 2}, {"v", 1}});
  EXPECT_EQ(r.output.vertex_count(), 3u);
  EXPECT_EQ(sources(r.output), (std::vector<VertexId>{"u~h1"}));
  EXPECT_TRUE(all_hold(r));
}

TEST(FullCorner, Refusals) {
  const Graph uv = testing_helpers::edges("edge lu u u\nedge lv v v\nedge e u v\nedge f v u\n");
  EXPECT_EQ(code_of([&] { realize_full_corner(uv, VertexMultiset{{"u", 1}}); }), "not-full-form");
  EXPECT_EQ(code_of([] { realize_full_corner(testing_helpers::edges("edge a u v\nedge b v u\n"), VertexMultiset{{"u", 1}, {"v", 1}}); }),
            "missing-self-loop");
}

TEST(Corner, TwoLoopsDoubleProjection) {
  const auto r = realize_corner(loops(2), VertexMultiset{{"v0", 2}});
  EXPECT_TRUE(iso(r.output, add_head(loops(2), "v0", 1)));
  EXPECT_TRUE(all_hold(r));
}

TEST(Corner, UnitProjectionOnCkGraph) {
  const Graph g = fixture("ev02.graph");
  VertexMultiset ones;
  for (const auto& v : g.vertices()) ones.add(v);
  const auto r = realize_corner(g, ones);
  EXPECT_TRUE(all_hold(r));
  EXPECT_EQ(r.after, r.before);
}

TEST(Corner, TwoCycleWithLoopAtU) {
  const Graph g = testing_helpers::edges("edge a u v\nedge b v u\nedge l u u\n");
  const auto r = realize_corner(g, VertexMultiset{{"v", 1}});
  EXPECT_TRUE(all_hold(r));
  ASSERT_TRUE(r.projection);
  EXPECT_FALSE(r.projection->empty());
  EXPECT_TRUE(r.before.same_groups(r.after));
}

TEST(Corner, RestrictsToClosure) {
  // p lives on the bottom component; the top one is discarded.
  const Graph g = testing_helpers::edges("edge a u v\nedge lu u u\nedge lv v v\nedge lv2 v v\n");
  const auto r = realize_corner(g, VertexMultiset{{"v", 1}});
  EXPECT_EQ(r.reference, "restriction");
  EXPECT_TRUE(iso(r.output, loops(2)));
}

TEST(Corner, Refusals) {
  EXPECT_EQ(code_of([] { realize_corner(loops(2), VertexMultiset{}); }), "zero-multiset");
  EXPECT_EQ(code_of([] { realize_corner(fixture("head-v0-2.graph"), VertexMultiset{{"v0", 1}}); }), "has-source");
}

TEST(Amplify, Examples) {
  const Graph e = fixture("example-E.graph");
  EXPECT_EQ(matrix_amplify(e, 1).output, e);
  const auto l3 = matrix_amplify(loops(1), 3);
  EXPECT_EQ(l3.output.vertex_count(), 3u);
  EXPECT_EQ(l3.after.k0_rank, 1u);
  EXPECT_EQ(l3.after.k1_rank, 1u);
  EXPECT_TRUE(l3.after.unit.divisible[2]);
  EXPECT_FALSE(l3.after.unit.divisible[1]);
  const auto e2 = matrix_amplify(e, 2);
  EXPECT_TRUE(iso(e2.output, add_head(e, "v0", 1)));
  EXPECT_EQ(e2.after.k0_rank, 0u);
  EXPECT_EQ(code_of([&] { matrix_amplify(e, 0); }), "non-positive-length");
}
