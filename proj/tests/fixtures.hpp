#pragma once

#include <set>
#include <string>

#include "efdp/generators.hpp"
#include "efdp/market.hpp"
#include "efdp/matching.hpp"

namespace efdp::testing {

/// 2x2 reference market: a1 values (3, 1), a2 values (2, 2).
inline Market make_m1() {
  Market m({"a1", "a2"}, {"i1", "i2"});
  m.set_value(0, 0, Rational(3));
  m.set_value(0, 1, Rational(1));
  m.set_value(1, 0, Rational(2));
  m.set_value(1, 1, Rational(2));
  return m;
}

/// Two agents fighting over one item of equal value 3.
inline Market make_contested_single() {
  Market m({"a1", "a2"}, {"i1"});
  m.set_value(0, 0, Rational(3));
  m.set_value(1, 0, Rational(3));
  return m;
}

/// K4: the complete graph on four vertices (3-regular, min cover 3).
inline Graph make_k4() {
  Graph g;
  g.n = 4;
  for (int u = 0; u < 4; ++u) {
    for (int v = u + 1; v < 4; ++v) g.edges.emplace_back(u, v);
  }
  return g;
}

/// K33: complete bipartite 3+3 (3-regular, min cover 3).
inline Graph make_k33() {
  Graph g;
  g.n = 6;
  for (int u = 0; u < 3; ++u) {
    for (int v = 3; v < 6; ++v) g.edges.emplace_back(u, v);
  }
  return g;
}

/// The sampled market sizes for the randomized batteries: deterministic
/// sizes in 2..5 per seed.
inline Market battery_market(std::uint64_t seed) {
  int n_agents = 2 + static_cast<int>(seed % 4);
  int n_items = 2 + static_cast<int>((seed / 4) % 4);
  return gen_random(n_agents, n_items, 5, seed);
}

inline std::set<std::pair<int, int>> edges_of(const std::vector<Matching>& all) {
  std::set<std::pair<int, int>> out;
  for (const auto& m : all) out.insert(m.pairs.begin(), m.pairs.end());
  return out;
}

}  // namespace efdp::testing
