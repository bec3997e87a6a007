#include "efdp/oracles.hpp"

#include <algorithm>

namespace efdp {

namespace {

// A scheme being driven step by step by the exhaustive adversary. Value
// semantics so branches can fork cheaply.
class Cursor {
 public:
  virtual ~Cursor() = default;
  virtual std::unique_ptr<Cursor> clone() const = 0;
  /// Offers for the arriving agent (by item id).
  virtual std::map<ItemId, OfferPrice> offers(const AgentId& agent) = 0;
  virtual void apply(const AgentId& agent, const std::optional<ItemId>& purchase) = 0;
  virtual const Market& run_market() const = 0;
};

class WelfareCursor final : public Cursor {
 public:
  WelfareCursor(const Market& pruned, const Covering& cov, const PricingParameters& params,
                WelfareNotion notion)
      : pruned_(&pruned), cov_(&cov), params_(&params), notion_(notion),
        state_(initial_state(pruned, cov, max_weight_matching(pruned))) {}

  std::unique_ptr<Cursor> clone() const override { return std::make_unique<WelfareCursor>(*this); }

  std::map<ItemId, OfferPrice> offers(const AgentId&) override {
    view_ = prepare_step(*pruned_, *cov_, *params_, state_, notion_);
    std::map<ItemId, OfferPrice> out;
    for (const auto& [i, p] : view_.prices) out[pruned_->item(i)] = p;
    return out;
  }

  void apply(const AgentId& agent, const std::optional<ItemId>& purchase) override {
    std::optional<int> item;
    if (purchase) item = pruned_->item_index(*purchase);
    state_ = update_after_purchase(*pruned_, *cov_, view_, state_, notion_,
                                   pruned_->agent_index(agent), item);
  }

  const Market& run_market() const override { return *pruned_; }

 private:
  const Market* pruned_;
  const Covering* cov_;
  const PricingParameters* params_;
  WelfareNotion notion_;
  DynamicState state_;
  StepView view_;
};

class StaticCursor final : public Cursor {
 public:
  StaticCursor(const Market& market, const std::map<ItemId, Rational>& prices)
      : market_(&market), prices_(&prices), item_in_(market.n_items(), 1) {}

  std::unique_ptr<Cursor> clone() const override { return std::make_unique<StaticCursor>(*this); }

  std::map<ItemId, OfferPrice> offers(const AgentId&) override {
    std::map<ItemId, OfferPrice> out;
    for (int i = 0; i < market_->n_items(); ++i) {
      if (item_in_[i]) out[market_->item(i)] = prices_->at(market_->item(i));
    }
    return out;
  }

  void apply(const AgentId&, const std::optional<ItemId>& purchase) override {
    if (purchase) item_in_[market_->item_index(*purchase)] = 0;
  }

  const Market& run_market() const override { return *market_; }

 private:
  const Market* market_;
  const std::map<ItemId, Rational>* prices_;
  std::vector<char> item_in_;
};

class WeakRevenueCursor final : public Cursor {
 public:
  WeakRevenueCursor(const Market& market, const Matching& m)
      : market_(&market), matching_(&m), item_in_(market.n_items(), 1) {}

  std::unique_ptr<Cursor> clone() const override {
    return std::make_unique<WeakRevenueCursor>(*this);
  }

  std::map<ItemId, OfferPrice> offers(const AgentId& agent) override {
    std::map<ItemId, OfferPrice> out;
    int a = market_->agent_index(agent);
    int mine = matching_->item_of(a);
    for (int i = 0; i < market_->n_items(); ++i) {
      if (!item_in_[i]) continue;
      if (i == mine) {
        out[market_->item(i)] = market_->value(a, i);
      } else {
        out[market_->item(i)] = std::nullopt;
      }
    }
    return out;
  }

  void apply(const AgentId&, const std::optional<ItemId>& purchase) override {
    if (purchase) item_in_[market_->item_index(*purchase)] = 0;
  }

  const Market& run_market() const override { return *market_; }

 private:
  const Market* market_;
  const Matching* matching_;
  std::vector<char> item_in_;
};

struct Aggregator {
  AdversaryReport report;
  bool any = false;

  void leaf(const Trace& trace, const std::function<void(const Trace&)>& hook) {
    Rational w = social_welfare(trace);
    Rational r = revenue(trace);
    if (!any) {
      report.min_welfare = report.max_welfare = w;
      report.min_revenue = report.max_revenue = r;
      any = true;
    } else {
      report.min_welfare = min(report.min_welfare, w);
      report.max_welfare = max(report.max_welfare, w);
      report.min_revenue = min(report.min_revenue, r);
      report.max_revenue = max(report.max_revenue, r);
    }
    for (EnvyNotion n :
         {EnvyNotion::Strong, EnvyNotion::ExPost, EnvyNotion::ExAnte, EnvyNotion::Weak}) {
      if (report.all_pass[static_cast<int>(n)] && verify_envy_free(trace, n)) {
        report.all_pass[static_cast<int>(n)] = false;
      }
    }
    ++report.branches;
    if (hook) hook(trace);
  }
};

void explore(const Cursor& cursor, const std::vector<AgentId>& order, std::size_t depth,
             Trace& partial, ZeroMode zero_mode, Aggregator& agg,
             const std::function<void(const Trace&)>& hook) {
  if (depth == order.size()) {
    agg.leaf(partial, hook);
    return;
  }
  std::unique_ptr<Cursor> here = cursor.clone();
  const AgentId& agent = order[depth];
  std::map<ItemId, OfferPrice> offers = here->offers(agent);

  TraceStep step;
  step.agent = agent;
  for (const auto& item : here->run_market().items()) {
    if (offers.count(item)) {
      step.available.push_back(item);
      step.offers[item] = offers.at(item);
    }
  }

  // candidate purchases under the agent-chooses rule
  std::map<int, Rational> rational_offers;
  const Market& m = here->run_market();
  for (const auto& [item, price] : offers) {
    if (price) rational_offers.emplace(m.item_index(item), *price);
  }
  ChoiceSet choices = compute_choices(m, rational_offers, m.agent_index(agent));
  std::vector<std::optional<ItemId>> branches;
  if (choices.best_sign > 0) {
    for (int i : choices.argmax) branches.emplace_back(m.item(i));
  } else if (choices.best_sign == 0) {
    if (zero_mode != ZeroMode::Decline) {
      for (int i : choices.argmax) branches.emplace_back(m.item(i));
    }
    if (zero_mode != ZeroMode::Take) branches.emplace_back(std::nullopt);
  } else {
    branches.emplace_back(std::nullopt);
  }

  for (const auto& choice : branches) {
    std::unique_ptr<Cursor> fork = here->clone();
    fork->apply(agent, choice);
    TraceStep forked = step;
    forked.purchase = choice;
    partial.steps.push_back(std::move(forked));
    explore(*fork, order, depth + 1, partial, zero_mode, agg, hook);
    partial.steps.pop_back();
  }
}

void permutations_of(const Market& m, std::vector<std::vector<AgentId>>& out) {
  std::vector<AgentId> order = m.agents();
  std::sort(order.begin(), order.end());
  do {
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
}

}  // namespace

AdversaryReport oracle_exhaustive_adversary(const Market& market, const SchemeDescriptor& scheme,
                                            const AdversaryOptions& options) {
  using Kind = SchemeDescriptor::Kind;

  // the seller-ordered schemes are deterministic single runs
  if (scheme.kind == Kind::RevenueExPost || scheme.kind == Kind::RevenueExAnte) {
    Trace trace = scheme.kind == Kind::RevenueExPost
                      ? run_revenue_ex_post(market)
                      : run_revenue_ex_ante(market, scheme.delta_override);
    Aggregator agg;
    agg.leaf(trace, options.on_leaf);
    return agg.report;
  }

  if (market.n_agents() > options.max_agents && options.orders.empty()) {
    throw InstanceTooLarge("exhaustive adversary limited to " +
                           std::to_string(options.max_agents) + " agents");
  }
  std::vector<std::vector<AgentId>> orders = options.orders;
  if (orders.empty()) permutations_of(market, orders);

  ZeroMode zero = scheme.zero_mode.value_or(
      scheme.kind == Kind::WelfareExPost || scheme.kind == Kind::WelfareExAnte ? ZeroMode::Both
                                                                               : ZeroMode::Take);

  // shared preprocessing per scheme kind
  std::optional<Market> pruned;
  std::optional<Covering> cov;
  std::optional<PricingParameters> params;
  std::optional<Matching> matching;
  if (scheme.kind == Kind::WelfareExPost || scheme.kind == Kind::WelfareExAnte) {
    pruned = prune_uncovered_items(market).first;
    cov = refined_covering(*pruned, analyze_market(*pruned));
    params = compute_parameters(*pruned, *cov);
  } else if (scheme.kind == Kind::RevenueWeak) {
    matching = max_weight_matching(market);
  } else if (scheme.kind == Kind::StaticPrices) {
    for (const auto& item : market.items()) {
      if (!scheme.static_prices.count(item)) {
        throw std::invalid_argument("static prices must cover every item");
      }
    }
  }

  Aggregator agg;
  for (const auto& order : orders) {
    std::unique_ptr<Cursor> cursor;
    switch (scheme.kind) {
      case Kind::WelfareExPost:
        cursor = std::make_unique<WelfareCursor>(*pruned, *cov, *params, WelfareNotion::ExPost);
        break;
      case Kind::WelfareExAnte:
        cursor = std::make_unique<WelfareCursor>(*pruned, *cov, *params, WelfareNotion::ExAnte);
        break;
      case Kind::RevenueWeak:
        cursor = std::make_unique<WeakRevenueCursor>(market, *matching);
        break;
      case Kind::StaticPrices:
        cursor = std::make_unique<StaticCursor>(market, scheme.static_prices);
        break;
      default:
        break;
    }
    Trace partial;
    partial.market = cursor->run_market();
    explore(*cursor, order, 0, partial, zero, agg, options.on_leaf);
  }
  return agg.report;
}

StaticOracleResult oracle_static_ef_revenue(const Market& market, int bound) {
  if (market.n_agents() > bound || market.n_items() > bound) {
    throw InstanceTooLarge("static revenue oracle limited to " + std::to_string(bound) +
                           " agents and items");
  }

  StaticOracleResult result;
  result.value = Rational(0);
  bool have = false;

  std::vector<int> alloc(market.n_agents(), -1);
  std::vector<char> taken(market.n_items(), 0);

  // Prices each allocation revenue-maximally or reports infeasibility.
  auto price_allocation = [&]() -> std::optional<StaticSolution> {
    std::vector<int> sold;  // item -> buyer implied by alloc
    std::vector<int> buyer_of(market.n_items(), -1);
    for (int a = 0; a < market.n_agents(); ++a) {
      if (alloc[a] >= 0) {
        sold.push_back(alloc[a]);
        buyer_of[alloc[a]] = a;
      }
    }
    std::sort(sold.begin(), sold.end());
    // start from the rationality caps and relax the envy constraints
    // p(x_a) <= p(x_b) + v_a(x_a) - v_a(x_b) to the pointwise maximum
    std::map<int, Rational> price;
    for (int i : sold) price[i] = market.value(buyer_of[i], i);
    bool changed = true;
    for (std::size_t round = 0; changed; ++round) {
      if (round > sold.size() + 1) return std::nullopt;  // negative cycle: no finite pricing
      changed = false;
      for (int i : sold) {
        const int a = buyer_of[i];
        for (int other : sold) {
          if (other == i) continue;
          Rational cap = price[other] + market.value(a, i) - market.value(a, other);
          if (cap < price[i]) {
            price[i] = std::move(cap);
            changed = true;
          }
        }
      }
    }
    // feasibility: prices non-negative and nobody empty-handed sees a bargain
    for (int i : sold) {
      if (price[i].sign() < 0) return std::nullopt;
    }
    for (int a = 0; a < market.n_agents(); ++a) {
      if (alloc[a] >= 0) continue;
      for (int i : sold) {
        if (market.value(a, i) > price[i]) return std::nullopt;
      }
    }
    StaticSolution s;
    s.revenue = Rational(0);
    for (int i : sold) {
      s.prices[market.item(i)] = price[i];
      s.revenue += price[i];
    }
    // unsold items: priced high enough that nobody wants them; keep them
    // out of the offer set entirely
    for (int i = 0; i < market.n_items(); ++i) {
      if (buyer_of[i] < 0) s.prices[market.item(i)] = std::nullopt;
    }
    for (int a = 0; a < market.n_agents(); ++a) {
      s.allocation[market.agent(a)] =
          alloc[a] >= 0 ? std::optional<ItemId>(market.item(alloc[a])) : std::nullopt;
    }
    if (verify_static_solution(market, s)) return std::nullopt;
    return s;
  };

  auto recurse = [&](auto&& self, int a) -> void {
    if (a == market.n_agents()) {
      if (auto s = price_allocation()) {
        if (!have || s->revenue > result.value) {
          result.value = s->revenue;
          result.best = std::move(*s);
          have = true;
        }
      }
      return;
    }
    self(self, a + 1);
    for (int i = 0; i < market.n_items(); ++i) {
      if (taken[i]) continue;
      taken[i] = 1;
      alloc[a] = i;
      self(self, a + 1);
      alloc[a] = -1;
      taken[i] = 0;
    }
  };
  recurse(recurse, 0);
  return result;
}

GridOracleResult oracle_expost_revenue_opt(const Market& market,
                                           const std::vector<AgentId>& order,
                                           const std::vector<std::vector<ItemId>>& item_groups,
                                           const std::vector<Rational>& grid,
                                           bool allow_not_offered) {
  if (item_groups.size() > 10) {
    throw InstanceTooLarge("grid revenue search limited to 10 item groups");
  }
  std::vector<ItemId> grouped;
  for (const auto& g : item_groups) grouped.insert(grouped.end(), g.begin(), g.end());
  std::sort(grouped.begin(), grouped.end());
  std::vector<ItemId> all = market.items();
  std::sort(all.begin(), all.end());
  if (grouped != all) throw std::invalid_argument("item groups must partition the items");

  std::vector<OfferPrice> levels;
  for (const auto& p : grid) levels.emplace_back(p);
  if (allow_not_offered) levels.emplace_back(std::nullopt);

  GridOracleResult best;
  best.revenue = Rational(0);
  bool have = false;

  std::vector<std::size_t> pick(item_groups.size(), 0);
  for (;;) {
    // constant-over-time prices per group
    std::map<ItemId, OfferPrice> prices;
    for (std::size_t g = 0; g < item_groups.size(); ++g) {
      for (const auto& item : item_groups[g]) prices[item] = levels[pick[g]];
    }

    // simulate: deterministic lexicographic seller choice, take at zero
    Trace trace;
    trace.market = market;
    std::vector<char> item_in(market.n_items(), 1);
    for (const AgentId& id : order) {
      int agent = market.agent_index(id);
      TraceStep step;
      step.agent = id;
      std::map<int, Rational> rational_offers;
      for (int i = 0; i < market.n_items(); ++i) {
        if (!item_in[i]) continue;
        step.available.push_back(market.item(i));
        step.offers[market.item(i)] = prices.at(market.item(i));
        if (prices.at(market.item(i))) rational_offers.emplace(i, *prices.at(market.item(i)));
      }
      ChoiceSet c = compute_choices(market, rational_offers, agent);
      if (c.best_sign >= 0) {
        step.purchase = market.item(c.argmax.front());
        item_in[c.argmax.front()] = 0;
      }
      trace.steps.push_back(std::move(step));
    }

    if (!verify_envy_free(trace, EnvyNotion::ExPost)) {
      Rational r = revenue(trace);
      if (!have || r > best.revenue) {
        best.revenue = r;
        best.best_prices = prices;
        have = true;
      }
    }

    // next assignment
    std::size_t g = 0;
    while (g < pick.size() && ++pick[g] == levels.size()) {
      pick[g] = 0;
      ++g;
    }
    if (g == pick.size()) break;
  }
  if (!have) throw std::logic_error("no grid assignment produced an envy-free run");
  return best;
}

}  // namespace efdp
