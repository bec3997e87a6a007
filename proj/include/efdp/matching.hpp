#pragma once

#include <set>
#include <utility>
#include <vector>

#include "efdp/market.hpp"

namespace efdp {

/// A matching as (agent index, item index) pairs, sorted by agent index.
/// No agent or item appears twice.
struct Matching {
  std::vector<std::pair<int, int>> pairs;

  /// -1 when the agent is unmatched.
  int item_of(int agent) const;
  bool covers_item(int item) const;
  bool operator==(const Matching&) const = default;
};

Rational matching_weight(const Market& m, const Matching& match);

/// Maximum-weight matching, computed by the Hungarian potentials method on
/// exact rationals. Deterministic: reruns on the same market produce the
/// same matching. Zero-valuation pairs are dropped from the result (they
/// never change the weight).
Matching max_weight_matching(const Market& m);

/// Weight of a maximum-weight matching.
Rational opt_weight(const Market& m);

/// An edge is legal when some maximum-weight matching contains it; checked
/// per edge by deleting both endpoints, solving the residual market and
/// adding the edge's value back.
std::set<std::pair<int, int>> legal_edges(const Market& m);

/// Vertices covered by every maximum-weight matching, found by
/// delete-and-resolve: v is always covered iff removing v lowers the
/// optimum.
std::pair<std::set<int>, std::set<int>> always_covered_vertices(const Market& m);

struct MarketAnalysis {
  Rational opt;
  std::set<std::pair<int, int>> legal;          // (agent, item) indices
  std::set<int> always_covered_agents;
  std::set<int> always_covered_items;
};

MarketAnalysis analyze_market(const Market& m);

/// Repeatedly removes an item whose removal keeps the optimum unchanged,
/// scanning candidates in descending id order, until every remaining item
/// is covered by every maximum-weight matching. The optimum is preserved.
std::pair<Market, std::vector<ItemId>> prune_uncovered_items(const Market& m);

/// All maximum-weight matchings by exhaustive recursion; the optimum is
/// derived from the enumeration itself so this stays independent of the
/// Hungarian solver it is used to check. Guarded: throws InstanceTooLarge
/// above max_side vertices per side.
std::vector<Matching> enumerate_max_matchings(const Market& m, int max_side = 20);

}  // namespace efdp
