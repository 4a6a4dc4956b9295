#include <gtest/gtest.h>

#include <numeric>

#include "ckg/ktheory.hpp"
#include "ckg/moves.hpp"
#include "ckg/random.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ckg;
using testing_helpers::fixture;
using testing_helpers::loops;

namespace {

std::vector<long long> torsion_ll(const KInvariants& k) {
  std::vector<long long> out;
  for (const auto& d : k.k0_torsion) out.push_back(d.convert_to<long long>());
  return out;
}

/// Unit profile by enumeration, for graphs whose relation matrix is square
/// and nonsingular (every vertex regular, K0 finite). An element g of
/// Z^n / A Z^n lies in k K0 iff g - k x lies in A Z^n for some x taken mod
/// det A, and y lies in A Z^n iff adj(A) y = 0 mod det A.
struct RefProfile {
  long long order = 0;
  std::vector<bool> divisible;
};

RefProfile brute_profile(const Graph& g) {
  const auto vs = g.vertex_list();
  const std::size_t n = vs.size();
  oracle::Mat a(n, std::vector<long long>(n, 0));
  for (const auto& [_, e] : g.edges()) {
    const auto s = std::find(vs.begin(), vs.end(), e.source) - vs.begin();
    const auto r = std::find(vs.begin(), vs.end(), e.range) - vs.begin();
    ++a[r][s];
  }
  for (std::size_t i = 0; i < n; ++i) --a[i][i];
  const long long det = std::llabs(oracle::laplace_det(a));
  // adj(A)[i][j] = (-1)^{i+j} M_{ji}
  oracle::Mat adj(n, std::vector<long long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      oracle::Mat minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<long long> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(a[r][c]);
        minor.push_back(row);
      }
      adj[i][j] = ((i + j) % 2 ? -1 : 1) * oracle::laplace_det(minor);
    }
  auto in_image = [&](const std::vector<long long>& y) {
    for (std::size_t i = 0; i < n; ++i) {
      long long s = 0;
      for (std::size_t j = 0; j < n; ++j) s += adj[i][j] * y[j];
      if (s % det != 0) return false;
    }
    return true;
  };
  RefProfile p;
  for (long long k = 1;; ++k)
    if (in_image(std::vector<long long>(n, k))) {
      p.order = k;
      break;
    }
  for (long long k = 1; k <= 12; ++k) {
    bool found = false;
    std::vector<long long> x(n, 0);
    while (!found) {
      std::vector<long long> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = 1 - k * x[i];
      found = in_image(y);
      std::size_t i = 0;
      while (i < n && ++x[i] == det) x[i++] = 0;
      if (i == n) break;
    }
    p.divisible.push_back(found);
  }
  return p;
}

}  // namespace

TEST(VertexMatrix, Examples) {
  EXPECT_EQ(vertex_matrix(fixture("example-E.graph")), (IntMatrix{{2}}));
  EXPECT_EQ(vertex_matrix(fixture("head-v0-2.graph")), (IntMatrix{{2, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
  Graph two;
  two.add_vertex("a");
  two.add_vertex("b");
  EXPECT_EQ(vertex_matrix(two), (IntMatrix{{0, 0}, {0, 0}}));
}

TEST(KInvariants, TwoLoops) {
  const auto k = k_invariants(loops(2));
  EXPECT_TRUE(k.k0_torsion.empty());
  EXPECT_EQ(k.k0_rank, 0u);
  EXPECT_EQ(k.k1_rank, 0u);
  ASSERT_TRUE(k.unit.order);
  EXPECT_EQ(*k.unit.order, 1);
}

TEST(KInvariants, OneLoop) {
  const auto k = k_invariants(loops(1));
  EXPECT_TRUE(k.k0_torsion.empty());
  EXPECT_EQ(k.k0_rank, 1u);
  EXPECT_EQ(k.k1_rank, 1u);
  EXPECT_FALSE(k.unit.order);
  EXPECT_TRUE(k.unit.divisible[0]);
  EXPECT_FALSE(k.unit.divisible[1]);
}

TEST(KInvariants, EdgeIntoSink) {
  const auto k = k_invariants(testing_helpers::edges("edge e v w\n"));
  EXPECT_EQ(k.k0_rank, 1u);
  EXPECT_EQ(k.k1_rank, 0u);
}

TEST(KInvariants, LoopFamilyAgainstMinorsOracle) {
  for (int n = 1; n <= 9; ++n) {
    const Graph g = loops(n);
    const auto ref = oracle::k_groups(g);
    const auto k = k_invariants(g);
    EXPECT_EQ(torsion_ll(k), ref.torsion) << n;
    EXPECT_EQ(k.k0_rank, ref.k0_rank) << n;
    EXPECT_EQ(k.k1_rank, ref.k1_rank) << n;
    if (n >= 2) {
      EXPECT_EQ(*k.unit.order, n - 1);
      for (int d = 1; d <= 12; ++d) EXPECT_EQ(k.unit.divisible[d - 1], std::gcd(d, n - 1) == 1) << n << " " << d;
    }
  }
}

TEST(KInvariants, RandomGraphsAgainstMinorsOracle) {
  Rng rng(11);
  RandomGraphOptions opt;
  opt.max_vertices = 5;
  for (int t = 0; t < 150; ++t) {
    const Graph g = random_graph(rng, opt);
    const auto ref = oracle::k_groups(g);
    const auto k = k_invariants(g);
    ASSERT_EQ(torsion_ll(k), ref.torsion) << serialize_graph(g);
    ASSERT_EQ(k.k0_rank, ref.k0_rank) << serialize_graph(g);
    ASSERT_EQ(k.k1_rank, ref.k1_rank) << serialize_graph(g);
  }
}

TEST(KInvariants, UnitProfileAgainstEnumeration) {
  Rng rng(5);
  RandomGraphOptions opt;
  opt.max_vertices = 3;
  opt.no_sinks = true;
  int checked = 0;
  for (int t = 0; t < 400 && checked < 60; ++t) {
    const Graph g = random_graph(rng, opt);
    const KGroups kg(g);
    if (kg.k0_rank() != 0) continue;
    const auto det = abs(determinant(kg.relations()));
    if (det > 40) continue;
    ++checked;
    const auto ref = brute_profile(g);
    const auto p = kg.invariants().unit;
    ASSERT_TRUE(p.order) << serialize_graph(g);
    EXPECT_EQ(p.order->convert_to<long long>(), ref.order) << serialize_graph(g);
    for (int k = 0; k < 12; ++k) EXPECT_EQ(p.divisible[k], ref.divisible[k]) << serialize_graph(g) << k + 1;
  }
  EXPECT_GE(checked, 20);
}

TEST(KInvariants, ClassCoordinates) {
  const KGroups k(loops(4));  // K0 = Z/3
  EXPECT_EQ(k.class_of({{"v0", 3}}), k.class_of({}));
  EXPECT_TRUE(k.class_of({{"v0", 6}}).is_zero());
  EXPECT_EQ(k.class_of({{"v0", 4}}), k.unit_class());
  EXPECT_THROW(k.class_of({{"nope", 1}}), PreconditionError);
}

TEST(KInvariants, AmplifiedLoopUnitIsThreeTimesGenerator) {
  const Graph g = attach_heads(loops(1), {{"v0", 2}});
  const auto k = k_invariants(g);
  EXPECT_EQ(k.k0_rank, 1u);
  EXPECT_EQ(k.k1_rank, 1u);
  EXPECT_FALSE(k.unit.order);
  for (int d = 1; d <= 12; ++d) EXPECT_EQ(k.unit.divisible[d - 1], 3 % d == 0) << d;
}

TEST(IsCk, Examples) {
  const auto e = is_cuntz_krieger(loops(2));
  EXPECT_TRUE(e.is_ck);
  const auto sink = is_cuntz_krieger(testing_helpers::edges("edge e v w\n"));
  EXPECT_FALSE(sink.is_ck);
  EXPECT_EQ(sink.sinks, (std::vector<VertexId>{"w"}));
  EXPECT_EQ(sink.k0_rank, 1u);
  EXPECT_EQ(sink.k1_rank, 0u);
  EXPECT_TRUE(is_cuntz_krieger(fixture("head-v0-2.graph")).is_ck);
  EXPECT_THROW(is_cuntz_krieger(Graph{}), PreconditionError);
}

TEST(Record, StableFormat) {
  EXPECT_EQ(to_record(k_invariants(loops(3))),
            "k0_torsion=[2]\nk0_rank=0\nk1_rank=0\nunit_order=2\nunit_divisible_by=1,3,5,7,9,11\n");
  EXPECT_EQ(to_record(k_invariants(loops(1))),
            "k0_torsion=[]\nk0_rank=1\nk1_rank=1\nunit_order=inf\nunit_divisible_by=1\n");
}
