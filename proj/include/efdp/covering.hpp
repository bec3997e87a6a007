#pragma once

#include "efdp/difference.hpp"
#include "efdp/market.hpp"
#include "efdp/matching.hpp"

namespace efdp {

/// Weighted covering: per-vertex duals with pi(a) + pi(i) >= v_a(i) on
/// every pair, all values non-negative, and total equal to the maximum
/// matching weight.
struct Covering {
  std::vector<Rational> agent_pi;
  std::vector<Rational> item_pi;

  Rational total() const;
  bool is_tight(const Market& m, int a, int i) const {
    return agent_pi[a] + item_pi[i] == m.value(a, i);
  }
};

/// Any optimal covering: complementary to one maximum-weight matching
/// (matched pairs tight, exposed vertices at dual zero), solved as a
/// difference-constraint system.
Covering optimal_covering(const Market& m);

/// The refined covering: (a) an edge is tight iff it is legal, and
/// (b) a vertex has dual zero iff some maximum-weight matching leaves it
/// uncovered. Requires a pruned market (every item always covered).
/// Construction: equalities on legal edges, slack >= gamma on the rest,
/// dual zero on sometimes-exposed vertices, dual >= gamma on the others,
/// with gamma maximised over {1, 1/2, 1/4, ...}.
Covering refined_covering(const Market& m);
Covering refined_covering(const Market& m, const MarketAnalysis& analysis);

/// Price-shift constants. delta separates tight from non-tight choices;
/// epsilon orders component indices inside the price formulas.
struct PricingParameters {
  Rational delta;
  Rational epsilon;
};

/// delta = (1/4) min{ non-tight slack, item duals, positive agent duals },
/// defaulting to 1 when the market is degenerate and that set is empty;
/// epsilon = delta / (2 n 2^n).
PricingParameters compute_parameters(const Market& m, const Covering& cov);

}  // namespace efdp
