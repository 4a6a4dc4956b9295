#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "ckg/graph.hpp"

namespace ckg {

/// Seeded random source for fuzzing.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded draws use rejection sampling on the raw 64-bit words
/// instead of <random> distributions, whose algorithms are implementation
/// defined, so a seed reproduces the same cases on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }

  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::mt19937_64 engine_;
};

struct RandomGraphOptions {
  std::size_t min_vertices = 1;
  std::size_t max_vertices = 8;
  std::uint64_t max_parallel = 3;
  /// Each ordered pair (including loops) carries edges with probability
  /// edge_num / edge_den.
  std::uint64_t edge_num = 1;
  std::uint64_t edge_den = 3;
  bool no_sinks = false;
  bool all_self_loops = false;
};

/// Vertices v0, v1, ...; edges e0, e1, ... in generation order.
inline Graph random_graph(Rng& rng, const RandomGraphOptions& opt) {
  const auto n = static_cast<std::size_t>(
      rng.between(static_cast<std::int64_t>(opt.min_vertices), static_cast<std::int64_t>(opt.max_vertices)));
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
  std::size_t next_edge = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> mult;
  auto add = [&](std::size_t s, std::size_t r) {
    if (mult[{s, r}] >= opt.max_parallel) return;
    ++mult[{s, r}];
    g.add_edge("e" + std::to_string(next_edge++), "v" + std::to_string(s), "v" + std::to_string(r));
  };
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t r = 0; r < n; ++r)
      if (rng.chance(opt.edge_num, opt.edge_den)) {
        const auto k = rng.between(1, static_cast<std::int64_t>(opt.max_parallel));
        for (std::int64_t i = 0; i < k; ++i) add(s, r);
      }
  if (opt.all_self_loops)
    for (std::size_t s = 0; s < n; ++s)
      if (mult[{s, s}] == 0) add(s, s);
  if (opt.no_sinks)
    for (std::size_t s = 0; s < n; ++s)
      if (g.out_degree("v" + std::to_string(s)) == 0) add(s, rng.below(n));
  return g;
}

}  // namespace ckg
