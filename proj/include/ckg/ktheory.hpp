#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckg/error.hpp"
#include "ckg/graph.hpp"
#include "ckg/int_matrix.hpp"

namespace ckg {

/// Largest k for which the unit profile records divisibility of [1].
inline constexpr std::size_t kProfileDivisors = 12;

/// Automorphism-invariant fingerprint of an element of K0: its order and for
/// k = 1..12 whether it lies in k*K0.
struct UnitProfile {
  std::optional<Integer> order;  // nullopt: infinite order
  std::array<bool, kProfileDivisors> divisible{};

  friend bool operator==(const UnitProfile&, const UnitProfile&) = default;
};

struct KInvariants {
  std::vector<Integer> k0_torsion;  // elementary divisors > 1, ascending
  std::size_t k0_rank = 0;
  std::size_t k1_rank = 0;
  UnitProfile unit;

  /// Agreement of the groups, ignoring the unit class.
  bool same_groups(const KInvariants& o) const {
    return k0_torsion == o.k0_torsion && k0_rank == o.k0_rank && k1_rank == o.k1_rank;
  }

  friend bool operator==(const KInvariants&, const KInvariants&) = default;
};

/// B[v][w] = number of edges v -> w, rows and columns in canonical vertex order.
inline IntMatrix vertex_matrix(const Graph& g) {
  const auto vs = g.vertex_list();
  std::map<VertexId, std::size_t> idx;
  for (std::size_t i = 0; i < vs.size(); ++i) idx.emplace(vs[i], i);
  IntMatrix b(vs.size(), vs.size());
  for (const auto& [_, e] : g.edges()) b(idx.at(e.source), idx.at(e.range)) += 1;
  return b;
}

/// Canonical coordinates of a K0 element: residues in the torsion summands
/// followed by the free coordinates. Two vectors define the same class iff
/// their coordinates are equal.
struct K0Element {
  std::vector<Integer> torsion;
  std::vector<Integer> free;

  bool is_zero() const {
    for (const auto& x : torsion) if (x != 0) return false;
    for (const auto& x : free) if (x != 0) return false;
    return true;
  }

  friend bool operator==(const K0Element&, const K0Element&) = default;
};

/// K0 = coker and K1 = ker of (B^t - I) restricted to the columns of regular
/// vertices, viewed as a map into the free group on all vertices.
class KGroups {
 public:
  explicit KGroups(const Graph& g) : vertices_(g.vertex_list()) {
    std::vector<std::size_t> regular;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (is_regular(g, vertices_[i])) regular.push_back(i);
    IntMatrix m = vertex_matrix(g).transposed();
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= 1;
    relations_ = m.select_columns(regular);
    snf_ = smith_normal_form(relations_);
    rank_ = snf_.rank();
    regular_count_ = regular.size();
    const auto diag = snf_.diagonal();
    for (std::size_t i = 0; i < rank_; ++i)
      if (diag[i] > 1) {
        torsion_rows_.push_back(i);
        torsion_.push_back(diag[i]);
      }
  }

  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  const IntMatrix& relations() const noexcept { return relations_; }
  const SnfResult& snf() const noexcept { return snf_; }
  const std::vector<Integer>& torsion() const noexcept { return torsion_; }
  std::size_t k0_rank() const noexcept { return vertices_.size() - rank_; }
  std::size_t k1_rank() const noexcept { return regular_count_ - rank_; }

  /// Class of sum_v x[v] [p_v]; vertices absent from `x` count as zero.
  K0Element class_of(const std::map<VertexId, Integer>& x) const {
    std::vector<Integer> vec(vertices_.size());
    for (const auto& [v, k] : x) {
      auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
      if (it == vertices_.end() || *it != v)
        throw PreconditionError("unknown-vertex", "no vertex '" + v + "'");
      vec[static_cast<std::size_t>(it - vertices_.begin())] = k;
    }
    return class_of_vector(vec);
  }

  K0Element class_of_vector(const std::vector<Integer>& x) const {
    const auto y = snf_.u.apply(x);
    K0Element out;
    for (std::size_t k = 0; k < torsion_rows_.size(); ++k) {
      Integer r = y[torsion_rows_[k]] % torsion_[k];
      if (r < 0) r += torsion_[k];
      out.torsion.push_back(r);
    }
    for (std::size_t i = rank_; i < y.size(); ++i) out.free.push_back(y[i]);
    return out;
  }

  /// Class of the unit, sum over all vertices.
  K0Element unit_class() const {
    return class_of_vector(std::vector<Integer>(vertices_.size(), Integer(1)));
  }

  UnitProfile profile(const K0Element& x) const {
    UnitProfile p;
    bool finite = true;
    for (const auto& f : x.free)
      if (f != 0) finite = false;
    if (finite) {
      Integer order = 1;
      for (std::size_t k = 0; k < torsion_.size(); ++k) {
        Integer part = torsion_[k] / boost::multiprecision::gcd(torsion_[k], x.torsion[k]);
        order = boost::multiprecision::lcm(order, part);
      }
      p.order = order;
    }
    for (std::size_t k = 1; k <= kProfileDivisors; ++k) {
      const Integer kk = static_cast<unsigned>(k);
      bool ok = true;
      for (const auto& f : x.free)
        if (f % kk != 0) ok = false;
      // k z = c has a solution mod d iff gcd(k, d) | c
      for (std::size_t t = 0; t < torsion_.size() && ok; ++t)
        if (x.torsion[t] % boost::multiprecision::gcd(kk, torsion_[t]) != 0) ok = false;
      p.divisible[k - 1] = ok;
    }
    return p;
  }

  KInvariants invariants() const {
    return KInvariants{torsion_, k0_rank(), k1_rank(), profile(unit_class())};
  }

 private:
  std::vector<VertexId> vertices_;
  IntMatrix relations_;
  SnfResult snf_;
  std::size_t rank_ = 0;
  std::size_t regular_count_ = 0;
  std::vector<std::size_t> torsion_rows_;
  std::vector<Integer> torsion_;
};

inline KInvariants k_invariants(const Graph& g) { return KGroups(g).invariants(); }

/// Outcome of the Cuntz-Krieger decision: the combinatorial test (finite, no
/// sinks) and the K-theoretic test (rank K0 = rank K1), which must agree.
struct CkVerdict {
  bool is_ck = false;
  std::vector<VertexId> sinks;
  std::size_t k0_rank = 0;
  std::size_t k1_rank = 0;
};

inline CkVerdict is_cuntz_krieger(const Graph& g) {
  if (g.empty()) throw PreconditionError("empty-graph", "graph has no vertices");
  KGroups k(g);
  CkVerdict v;
  v.sinks = ckg::sinks(g);
  v.k0_rank = k.k0_rank();
  v.k1_rank = k.k1_rank();
  const bool combinatorial = v.sinks.empty();
  const bool ranks_equal = v.k0_rank == v.k1_rank;
  if (combinatorial != ranks_equal)
    throw InternalError("sink test and rank test disagree");
  v.is_ck = combinatorial;
  return v;
}

// Stable key-value record used by reports and golden files.
inline std::string format_torsion(const std::vector<Integer>& t) {
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + t[i].str();
  return out + "]";
}

inline std::string format_order(const UnitProfile& p) {
  return p.order ? p.order->str() : std::string("inf");
}

inline std::string format_divisors(const UnitProfile& p) {
  std::string out;
  for (std::size_t k = 0; k < kProfileDivisors; ++k)
    if (p.divisible[k]) out += (out.empty() ? "" : ",") + std::to_string(k + 1);
  return out;
}

inline std::string to_record(const KInvariants& k) {
  return "k0_torsion=" + format_torsion(k.k0_torsion) + "\n" +
         "k0_rank=" + std::to_string(k.k0_rank) + "\n" +
         "k1_rank=" + std::to_string(k.k1_rank) + "\n" +
         "unit_order=" + format_order(k.unit) + "\n" +
         "unit_divisible_by=" + format_divisors(k.unit) + "\n";
}

}  // namespace ckg
