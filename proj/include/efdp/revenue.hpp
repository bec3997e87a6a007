#pragma once

#include "efdp/covering.hpp"
#include "efdp/envy.hpp"
#include "efdp/matching.hpp"
#include "efdp/trace.hpp"

namespace efdp {

enum class RevenueNotion { ExPost, ExAnte };

/// Seller-chosen arrival order.
///   ex-post: agents left unmatched by the maintained matching first, then
///            the matched ones by decreasing dual (ties by id order).
///   ex-ante: matched agents by increasing dual first, then the unmatched.
std::vector<AgentId> order_for_revenue(const Market& pruned, const Covering& cov,
                                       const Matching& m, RevenueNotion notion);

/// Sells every item at its buyer's full valuation: nothing is offered until
/// the unmatched agents have left, then each arriving agent sees only her
/// matched item, priced at her value for it. Revenue equals the maximum
/// matching weight exactly. `shave`, when set, lowers every offer by that
/// amount so buyers keep strictly positive utility.
Trace run_revenue_ex_post(const Market& market, std::optional<Rational> shave = std::nullopt);

/// Serves matched agents in increasing dual order; at agent a's step every
/// remaining item i is priced pi(a) + pi(i) - delta/2^t (+ epsilon off her
/// matched item), which makes her matched item the unique utility
/// maximiser. Prices rise over time and the revenue is within n*delta of
/// the maximum matching weight.
Trace run_revenue_ex_ante(const Market& market,
                          std::optional<Rational> delta_override = std::nullopt);

/// Fixed, known arrival order: each agent sees only her matched item at her
/// full valuation. Revenue equals the maximum matching weight.
Trace run_revenue_weak(const Market& market, const std::vector<AgentId>& order,
                       std::optional<Rational> shave = std::nullopt);

/// A static pricing plus allocation.
struct StaticSolution {
  std::map<ItemId, OfferPrice> prices;  // NOT_OFFERED stands in for an unbounded price
  std::map<AgentId, std::optional<ItemId>> allocation;
  Rational revenue;
};

/// First static envy violation of the solution, if any: a buyer preferring
/// another offered item (or her own at a loss), or a non-buyer seeing
/// positive utility somewhere.
std::optional<EnvyWitness> verify_static_solution(const Market& m, const StaticSolution& s);

/// Collapses a strongly envy-free trace to static prices with the same
/// allocation and revenue: sold items keep their sale price, unsold items
/// are not offered. Throws std::invalid_argument when the trace is not
/// strongly envy-free.
StaticSolution static_from_strong(const Trace& trace);

}  // namespace efdp
