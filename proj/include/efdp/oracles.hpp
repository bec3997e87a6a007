#pragma once

#include <functional>

#include "efdp/generators.hpp"
#include "efdp/revenue.hpp"
#include "efdp/welfare.hpp"

namespace efdp {

/// What an agent does when her best utility is exactly zero, as explored by
/// the exhaustive driver: always take, always decline, or branch on both.
enum class ZeroMode { Take, Decline, Both };

/// Which scheme the exhaustive driver runs.
struct SchemeDescriptor {
  enum class Kind {
    WelfareExPost,
    WelfareExAnte,
    RevenueExPost,
    RevenueExAnte,
    RevenueWeak,
    StaticPrices,
  };
  Kind kind = Kind::WelfareExPost;
  std::map<ItemId, Rational> static_prices;      // StaticPrices only
  std::optional<Rational> delta_override;        // RevenueExAnte only
  std::optional<ZeroMode> zero_mode;             // defaults: welfare Both, others Take

  static SchemeDescriptor welfare(WelfareNotion n) {
    return {n == WelfareNotion::ExPost ? Kind::WelfareExPost : Kind::WelfareExAnte, {}, {}, {}};
  }
};

struct AdversaryOptions {
  /// Orders to drive: all permutations when empty (guarded by max_agents),
  /// otherwise exactly the given ones. Ignored by the schemes that choose
  /// their own order.
  std::vector<std::vector<AgentId>> orders;
  int max_agents = 6;
  /// Runs on every completed branch; used by tests to pin extra facts.
  std::function<void(const Trace&)> on_leaf;
};

struct AdversaryReport {
  Rational min_welfare, max_welfare;
  Rational min_revenue, max_revenue;
  long long branches = 0;
  /// Whether every branch passed the verifier for each notion.
  bool all_pass[4] = {true, true, true, true};

  bool passes(EnvyNotion n) const { return all_pass[static_cast<int>(n)]; }
};

/// Runs the scheme under every arrival order and every tie-break decision
/// (argmax ties always branch; zero-utility take-or-leave branches per the
/// ZeroMode), aggregating the objectives and the verifier outcomes.
AdversaryReport oracle_exhaustive_adversary(const Market& market, const SchemeDescriptor& scheme,
                                            const AdversaryOptions& options = {});

struct StaticOracleResult {
  Rational value;
  StaticSolution best;
};

/// Exact revenue optimum over static envy-free pricings: enumerates every
/// allocation and prices each one revenue-maximally (the envy and
/// rationality constraints form a difference system whose pointwise-maximal
/// solution is reached by shortest-path relaxation), keeping the best
/// feasible result. Guarded by `bound` agents/items.
StaticOracleResult oracle_static_ef_revenue(const Market& market, int bound = 7);

/// Best revenue over constant grid-priced schedules for a vertex-cover
/// market: each vertex group takes one price from the grid (or is not
/// offered), agents arrive in the given order with deterministic seller
/// tie-breaking, and only runs whose trace is ex-post envy-free count.
struct GridOracleResult {
  Rational revenue;
  std::map<ItemId, OfferPrice> best_prices;
};

GridOracleResult oracle_expost_revenue_opt(const Market& market,
                                           const std::vector<AgentId>& order,
                                           const std::vector<std::vector<ItemId>>& item_groups,
                                           const std::vector<Rational>& grid,
                                           bool allow_not_offered = true);

}  // namespace efdp
