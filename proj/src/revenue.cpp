#include "efdp/revenue.hpp"

#include <algorithm>
#include <stdexcept>

namespace efdp {

std::vector<AgentId> order_for_revenue(const Market& pruned, const Covering& cov,
                                       const Matching& m, RevenueNotion notion) {
  std::vector<int> exposed, covered;
  for (int a = 0; a < pruned.n_agents(); ++a) {
    (m.item_of(a) >= 0 ? covered : exposed).push_back(a);
  }
  if (notion == RevenueNotion::ExPost) {
    std::stable_sort(covered.begin(), covered.end(),
                     [&](int x, int y) { return cov.agent_pi[x] > cov.agent_pi[y]; });
    covered.insert(covered.begin(), exposed.begin(), exposed.end());
  } else {
    std::stable_sort(covered.begin(), covered.end(),
                     [&](int x, int y) { return cov.agent_pi[x] < cov.agent_pi[y]; });
    covered.insert(covered.end(), exposed.begin(), exposed.end());
  }
  std::vector<AgentId> order;
  order.reserve(covered.size());
  for (int a : covered) order.push_back(pruned.agent(a));
  return order;
}

namespace {

// Single-offer steps shared by the ex-post and weak schemes: everything is
// NOT_OFFERED except the arriving agent's matched item at her valuation.
Trace run_single_offer(const Market& market, const Matching& m,
                       const std::vector<AgentId>& order, const std::optional<Rational>& shave) {
  if (shave && shave->sign() <= 0) throw std::invalid_argument("shave must be positive");
  Trace trace;
  trace.market = market;
  std::vector<char> item_in(market.n_items(), 1);
  for (const AgentId& id : order) {
    int agent = market.agent_index(id);
    if (agent < 0) throw std::invalid_argument("order names unknown agent '" + id + "'");
    TraceStep step;
    step.agent = id;
    int mine = m.item_of(agent);
    if (mine >= 0 && !item_in[mine]) {
      throw std::logic_error("matched item sold before its buyer arrived");
    }
    for (int i = 0; i < market.n_items(); ++i) {
      if (!item_in[i]) continue;
      step.available.push_back(market.item(i));
      step.offers[market.item(i)] = std::nullopt;
    }
    if (mine >= 0) {
      Rational price = market.value(agent, mine);
      if (shave) {
        price -= *shave;
        if (price.sign() < 0) {
          throw std::invalid_argument("shave exceeds a sale price");
        }
      }
      step.offers[market.item(mine)] = price;
      // utility is 0 (or the shave); the agent takes the item
      step.purchase = market.item(mine);
      item_in[mine] = 0;
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

}  // namespace

Trace run_revenue_ex_post(const Market& market, std::optional<Rational> shave) {
  auto [pruned, removed] = prune_uncovered_items(market);
  const MarketAnalysis analysis = analyze_market(pruned);
  const Covering cov = refined_covering(pruned, analysis);
  const Matching m = max_weight_matching(pruned);
  return run_single_offer(pruned, m, order_for_revenue(pruned, cov, m, RevenueNotion::ExPost),
                          shave);
}

Trace run_revenue_ex_ante(const Market& market, std::optional<Rational> delta_override) {
  auto [pruned, removed] = prune_uncovered_items(market);
  const MarketAnalysis analysis = analyze_market(pruned);
  const Covering cov = refined_covering(pruned, analysis);
  const Matching m = max_weight_matching(pruned);

  // 0 < delta < min{ non-tight slack, item dual }; epsilon < delta / 2^n
  std::optional<Rational> bound;
  auto shrink = [&](const Rational& r) {
    if (!bound || r < *bound) bound = r;
  };
  for (int a = 0; a < pruned.n_agents(); ++a) {
    for (int i = 0; i < pruned.n_items(); ++i) {
      if (!cov.is_tight(pruned, a, i)) {
        shrink(cov.agent_pi[a] + cov.item_pi[i] - pruned.value(a, i));
      }
    }
  }
  for (int i = 0; i < pruned.n_items(); ++i) shrink(cov.item_pi[i]);

  Rational delta = compute_parameters(pruned, cov).delta;
  if (delta_override) {
    if (delta_override->sign() <= 0 || (bound && !(*delta_override < *bound))) {
      throw std::invalid_argument("delta must lie in (0, " + (bound ? bound->str() : "inf") +
                                  ")");
    }
    delta = *delta_override;
  }
  const int n = pruned.n_agents();
  const Rational eps = delta * pow2(-(n + 1));

  Trace trace;
  trace.market = pruned;
  std::vector<char> item_in(pruned.n_items(), 1);
  int t = 0;
  for (const AgentId& id : order_for_revenue(pruned, cov, m, RevenueNotion::ExAnte)) {
    ++t;
    const int agent = pruned.agent_index(id);
    const int mine = m.item_of(agent);
    TraceStep step;
    step.agent = id;
    if (mine < 0) {
      // every item is gone by the time the unmatched agents arrive
      for (int i = 0; i < pruned.n_items(); ++i) {
        if (item_in[i]) {
          step.available.push_back(pruned.item(i));
          step.offers[pruned.item(i)] = std::nullopt;
        }
      }
      trace.steps.push_back(std::move(step));
      continue;
    }
    const Rational base = cov.agent_pi[agent] - delta * pow2(-t);
    for (int i = 0; i < pruned.n_items(); ++i) {
      if (!item_in[i]) continue;
      Rational price = base + cov.item_pi[i];
      if (i != mine) price += eps;
      if (price.sign() < 0) throw std::logic_error("ex-ante revenue price went negative");
      step.available.push_back(pruned.item(i));
      step.offers[pruned.item(i)] = std::move(price);
    }
    // her matched item is the unique maximiser, at utility delta/2^t
    step.purchase = pruned.item(mine);
    item_in[mine] = 0;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

Trace run_revenue_weak(const Market& market, const std::vector<AgentId>& order,
                       std::optional<Rational> shave) {
  if (static_cast<int>(order.size()) != market.n_agents()) {
    throw std::invalid_argument("arrival order must cover every agent");
  }
  return run_single_offer(market, max_weight_matching(market), order, shave);
}

std::optional<EnvyWitness> verify_static_solution(const Market& m, const StaticSolution& s) {
  for (int a = 0; a < m.n_agents(); ++a) {
    Rational secured(0);
    auto it = s.allocation.find(m.agent(a));
    if (it != s.allocation.end() && it->second) {
      const OfferPrice& p = s.prices.at(*it->second);
      if (!p) return EnvyWitness{m.agent(a), 0, *it->second, Rational(0)};
      secured = m.value(a, m.item_index(*it->second)) - *p;
      if (secured.sign() < 0) {
        return EnvyWitness{m.agent(a), 0, *it->second, -secured};
      }
    }
    for (const auto& [item, price] : s.prices) {
      if (!price) continue;
      Rational u = m.value(a, m.item_index(item)) - *price;
      if (u > secured) return EnvyWitness{m.agent(a), 0, item, u - secured};
    }
  }
  return std::nullopt;
}

StaticSolution static_from_strong(const Trace& trace) {
  if (auto w = verify_envy_free(trace, EnvyNotion::Strong)) {
    throw std::invalid_argument("trace is not strongly envy-free (agent '" + w->agent +
                                "' prefers '" + w->item + "' at step " +
                                std::to_string(w->step) + ")");
  }
  StaticSolution s;
  s.revenue = Rational(0);
  for (const auto& item : trace.market.items()) s.prices[item] = std::nullopt;
  for (const auto& step : trace.steps) {
    s.allocation[step.agent] = step.purchase;
    if (step.purchase) {
      s.prices[*step.purchase] = sale_price(step);
      s.revenue += sale_price(step);
    }
  }
  if (auto w = verify_static_solution(trace.market, s)) {
    throw std::logic_error("static collapse of a strongly envy-free trace must stay envy-free");
  }
  return s;
}

}  // namespace efdp
