#include "efdp/welfare.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace efdp {

namespace {

struct Fail : std::logic_error {
  using std::logic_error::logic_error;
};

void require(bool ok, const char* what) {
  if (!ok) throw Fail(what);
}

}  // namespace

DynamicState initial_state(const Market& pruned, const Covering& cov, const Matching& m1) {
  DynamicState st;
  st.t = 1;
  st.agent_in.assign(pruned.n_agents(), 1);
  st.item_in.assign(pruned.n_items(), 1);
  st.match_item.assign(pruned.n_agents(), -1);
  st.match_agent.assign(pruned.n_items(), -1);
  for (const auto& [a, i] : m1.pairs) {
    st.match_item[a] = i;
    st.match_agent[i] = a;
  }
  for (int a = 0; a < pruned.n_agents(); ++a) {
    if (st.in_r(a)) require(cov.agent_pi[a].is_zero(), "an unmatched agent must have dual zero");
  }
  for (int i = 0; i < pruned.n_items(); ++i) {
    require(st.match_agent[i] >= 0, "a pruned market must start with every item matched");
  }
  return st;
}

ExchangeDigraph build_exchange_digraph(const Market& pruned, const Covering& cov,
                                       const DynamicState& st) {
  const int nv = pruned.n_agents() + pruned.n_items();
  ExchangeDigraph d;
  d.out.assign(nv, {});
  d.in.assign(nv, {});
  d.present.assign(nv, 0);
  for (int a = 0; a < pruned.n_agents(); ++a) d.present[agent_code(a)] = st.agent_in[a];
  for (int i = 0; i < pruned.n_items(); ++i) d.present[item_code(pruned, i)] = st.item_in[i];
  for (int a = 0; a < pruned.n_agents(); ++a) {
    if (!st.agent_in[a]) continue;
    for (int i = 0; i < pruned.n_items(); ++i) {
      if (!st.item_in[i] || !cov.is_tight(pruned, a, i)) continue;
      const int ac = agent_code(a), ic = item_code(pruned, i);
      if (st.match_item[a] == i) {
        d.out[ic].push_back(ac);  // matching copy, item to agent
        d.in[ac].push_back(ic);
      }
      // everything else, including the dummy copy of a matching edge
      d.out[ac].push_back(ic);
      d.in[ic].push_back(ac);
    }
  }
  for (auto& v : d.out) std::sort(v.begin(), v.end());
  for (auto& v : d.in) std::sort(v.begin(), v.end());
  return d;
}

SccView scc_topological(const ExchangeDigraph& d) {
  const int nv = static_cast<int>(d.present.size());
  // Tarjan, iterative.
  std::vector<int> index(nv, -1), low(nv, 0), comp(nv, -1);
  std::vector<char> on_stack(nv, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int next_index = 0;
  for (int root = 0; root < nv; ++root) {
    if (!d.present[root] || index[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> work;
    work.emplace_back(root, 0);
    while (!work.empty()) {
      auto& [v, ei] = work.back();
      if (ei == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (ei < d.out[v].size()) {
        int w = d.out[v][ei++];
        if (index[w] < 0) {
          work.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          std::vector<int> c;
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = static_cast<int>(comps.size());
            c.push_back(w);
            if (w == v) break;
          }
          std::sort(c.begin(), c.end());
          comps.push_back(std::move(c));
        }
        int v_done = v;
        work.pop_back();
        if (!work.empty()) {
          low[work.back().first] = std::min(low[work.back().first], low[v_done]);
        }
      }
    }
  }
  // Canonical topological order over the condensation: Kahn with the
  // smallest contained vertex code as tie-break.
  const int nc = static_cast<int>(comps.size());
  std::vector<std::set<int>> succ(nc);
  std::vector<int> indeg(nc, 0);
  for (int v = 0; v < nv; ++v) {
    if (!d.present[v]) continue;
    for (int w : d.out[v]) {
      if (comp[v] != comp[w] && succ[comp[v]].insert(comp[w]).second) ++indeg[comp[w]];
    }
  }
  std::set<std::pair<int, int>> ready;  // (min vertex code, comp)
  for (int c = 0; c < nc; ++c) {
    if (indeg[c] == 0) ready.insert({comps[c].front(), c});
  }
  SccView view;
  view.comp_of.assign(nv, -1);
  while (!ready.empty()) {
    auto [key, c] = *ready.begin();
    ready.erase(ready.begin());
    for (int s : succ[c]) {
      if (--indeg[s] == 0) ready.insert({comps[s].front(), s});
    }
    for (int v : comps[c]) view.comp_of[v] = static_cast<int>(view.components.size());
    view.components.push_back(comps[c]);
  }
  return view;
}

namespace {

std::vector<char> forward_reach(const ExchangeDigraph& d, const std::vector<int>& sources) {
  std::vector<char> seen(d.present.size(), 0);
  std::deque<int> q;
  for (int s : sources) {
    if (!seen[s]) {
      seen[s] = 1;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : d.out[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
    }
  }
  return seen;
}

std::vector<char> backward_reach(const ExchangeDigraph& d, const std::vector<int>& sources) {
  std::vector<char> seen(d.present.size(), 0);
  std::deque<int> q;
  for (int s : sources) {
    if (!seen[s]) {
      seen[s] = 1;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : d.in[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<char> reach_set_ex_post(const Market& pruned, const ExchangeDigraph& d,
                                    const DynamicState& st) {
  std::vector<int> sources;
  for (int a = 0; a < pruned.n_agents(); ++a) {
    if (st.in_r(a)) sources.push_back(agent_code(a));
  }
  return forward_reach(d, sources);
}

std::vector<char> reach_set_ex_ante(const Market& pruned, const ExchangeDigraph& d,
                                    const DynamicState& st, const Covering& cov) {
  std::vector<int> sources;
  for (int a = 0; a < pruned.n_agents(); ++a) {
    if (st.agent_in[a] && st.match_item[a] >= 0 && cov.agent_pi[a].is_zero()) {
      sources.push_back(agent_code(a));
    }
  }
  return backward_reach(d, sources);
}

namespace {

std::map<int, Rational> post_prices(const Market& pruned, const DynamicState& st,
                                    const SccView& scc, const std::vector<char>& in_s,
                                    const Covering& cov, const PricingParameters& params,
                                    WelfareNotion notion) {
  // inside S_t the shift is +delta/2^t for ex-post and -delta/2^t for
  // ex-ante; outside it is -delta(1 - 1/2^t), respectively +delta(1 - 1/2^t).
  const Rational half_t = pow2(-st.t);
  const Rational inside = params.delta * half_t;
  const Rational outside = params.delta * (Rational(1) - half_t);
  std::map<int, Rational> prices;
  for (int i = 0; i < pruned.n_items(); ++i) {
    if (!st.item_in[i]) continue;
    const int code = item_code(pruned, i);
    const Rational j_eps = Rational(scc.j_of(code)) * params.epsilon;
    Rational p = cov.item_pi[i] + j_eps;
    if (notion == WelfareNotion::ExPost) {
      p += in_s[code] ? inside : -outside;
    } else {
      p += in_s[code] ? -inside : outside;
    }
    require(p.sign() > 0, "posted prices must stay positive");
    prices.emplace(i, std::move(p));
  }
  return prices;
}

}  // namespace

std::map<int, Rational> post_prices_ex_post(const Market& pruned, const DynamicState& st,
                                            const SccView& scc, const std::vector<char>& in_s,
                                            const Covering& cov, const PricingParameters& params) {
  return post_prices(pruned, st, scc, in_s, cov, params, WelfareNotion::ExPost);
}

std::map<int, Rational> post_prices_ex_ante(const Market& pruned, const DynamicState& st,
                                            const SccView& scc, const std::vector<char>& in_s,
                                            const Covering& cov, const PricingParameters& params) {
  return post_prices(pruned, st, scc, in_s, cov, params, WelfareNotion::ExAnte);
}

ChoiceSet compute_choices(const Market& m, const std::map<int, Rational>& prices, int agent) {
  ChoiceSet out;
  std::optional<Rational> best;
  for (const auto& [i, p] : prices) {
    Rational u = m.value(agent, i) - p;
    if (!best || u > *best) {
      best = u;
      out.argmax.clear();
    }
    if (u == *best) out.argmax.push_back(i);
  }
  out.best_sign = best ? best->sign() : -1;
  return out;
}

std::optional<int> agent_choice(const Market& m, const std::map<int, Rational>& prices, int agent,
                                TiePolicy& policy) {
  ChoiceSet c = compute_choices(m, prices, agent);
  if (c.best_sign < 0) return std::nullopt;
  if (c.best_sign == 0 && !policy.take_at_zero()) return std::nullopt;
  return policy.pick(c.argmax);
}

StepView prepare_step(const Market& pruned, const Covering& cov, const PricingParameters& params,
                      const DynamicState& st, WelfareNotion notion) {
  StepView view;
  view.digraph = build_exchange_digraph(pruned, cov, st);
  view.scc = scc_topological(view.digraph);
  view.in_s = notion == WelfareNotion::ExPost
                  ? reach_set_ex_post(pruned, view.digraph, st)
                  : reach_set_ex_ante(pruned, view.digraph, st, cov);
  // The reach set is a union of whole components in both directions.
  for (const auto& comp : view.scc.components) {
    for (int v : comp) require(view.in_s[v] == view.in_s[comp.front()],
                               "reach set must be a union of whole components");
  }
  view.prices = post_prices(pruned, st, view.scc, view.in_s, cov, params, notion);

  // Tight offers always beat non-tight offers for every remaining agent;
  // the delta margin guarantees it, so verify on every posted vector.
  for (int a = 0; a < pruned.n_agents(); ++a) {
    if (!st.agent_in[a]) continue;
    std::optional<Rational> tight_min, loose_max;
    for (const auto& [i, p] : view.prices) {
      Rational u = pruned.value(a, i) - p;
      if (cov.is_tight(pruned, a, i)) {
        if (!tight_min || u < *tight_min) tight_min = u;
      } else {
        if (!loose_max || u > *loose_max) loose_max = u;
      }
    }
    if (tight_min && loose_max) {
      require(*tight_min > *loose_max, "a tight offer must strictly beat every non-tight offer");
    }
  }
  return view;
}

namespace {

// Shortest directed path in the exchange digraph from any source to any
// target, as a vertex sequence. Deterministic: adjacency is sorted and the
// search is breadth-first.
std::vector<int> find_path(const ExchangeDigraph& d, const std::vector<int>& sources,
                           const std::vector<char>& is_target) {
  std::vector<int> parent(d.present.size(), -2);
  std::deque<int> q;
  for (int s : sources) {
    if (parent[s] == -2) {
      parent[s] = -1;
      if (is_target[s]) return {s};
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : d.out[v]) {
      if (parent[w] != -2) continue;
      parent[w] = v;
      if (is_target[w]) {
        std::vector<int> path{w};
        for (int u = v; u != -1; u = parent[u]) path.push_back(u);
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push_back(w);
    }
  }
  throw Fail("required exchange path does not exist");
}

// Symmetric difference of the matching with the edges along a vertex path
// (or a cycle given as a closed path).
void toggle_along(const Market& pruned, DynamicState& st, const std::vector<int>& path) {
  std::vector<std::pair<int, int>> add;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    int u = path[k], v = path[k + 1];
    int a = u < pruned.n_agents() ? u : v;
    int i = u < pruned.n_agents() ? v - pruned.n_agents() : u - pruned.n_agents();
    require(a < pruned.n_agents() && i >= 0 && i < pruned.n_items(),
            "exchange path must alternate agents and items");
    if (st.match_item[a] == i) {
      st.match_item[a] = -1;
      st.match_agent[i] = -1;
    } else {
      add.emplace_back(a, i);
    }
  }
  for (const auto& [a, i] : add) {
    require(st.match_item[a] < 0 && st.match_agent[i] < 0,
            "exchange must produce a matching");
    st.match_item[a] = i;
    st.match_agent[i] = a;
  }
}

Rational matching_weight_now(const Market& pruned, const DynamicState& st) {
  Rational w(0);
  for (int a = 0; a < pruned.n_agents(); ++a) {
    if (st.agent_in[a] && st.match_item[a] >= 0) w += pruned.value(a, st.match_item[a]);
  }
  return w;
}

}  // namespace

DynamicState update_after_purchase(const Market& pruned, const Covering& cov, const StepView& view,
                                   const DynamicState& st, WelfareNotion notion, int agent,
                                   std::optional<int> purchase) {
  require(st.agent_in[agent], "arriving agent must still be present");
  const Rational before = matching_weight_now(pruned, st);
  DynamicState next = st;
  const bool in_r = st.in_r(agent);
  const bool in_s = view.in_s[agent_code(agent)];
  const bool zero_dual = cov.agent_pi[agent].is_zero();

  if (purchase) {
    const int item = *purchase;
    require(st.item_in[item], "purchased item must be available");
    require(cov.is_tight(pruned, agent, item), "a purchase must use a tight edge");
    if (notion == WelfareNotion::ExPost) {
      require(!in_r && !(in_s && zero_dual),
              "in the ex-post scheme only covered agents with a live dual buy");
    }
    if (!in_r) {
      require(view.scc.comp_of[agent_code(agent)] == view.scc.comp_of[item_code(pruned, item)],
              "a covered agent must buy inside her component");
      if (st.match_item[agent] == item) {
        next.match_item[agent] = -1;
        next.match_agent[item] = -1;
      } else {
        // rotate the matching along a directed cycle through the arc
        // agent -> item, then drop the sold pair
        std::vector<char> target(view.digraph.present.size(), 0);
        target[agent_code(agent)] = 1;
        std::vector<int> path = find_path(view.digraph, {item_code(pruned, item)}, target);
        path.insert(path.begin(), agent_code(agent));
        toggle_along(pruned, next, path);
        require(next.match_item[agent] == item, "cycle exchange must hand the agent her purchase");
        next.match_item[agent] = -1;
        next.match_agent[item] = -1;
      }
    } else {
      // ex-ante, unmatched agent inside the reach set: shift the matching
      // along a path from her purchase to a matched zero-dual agent
      require(notion == WelfareNotion::ExAnte, "an unmatched agent buys only in the ex-ante scheme");
      require(in_s, "an unmatched buyer must be inside the reach set");
      require(view.in_s[item_code(pruned, item)], "her purchase must be inside the reach set");
      std::vector<char> target(view.digraph.present.size(), 0);
      for (int b = 0; b < pruned.n_agents(); ++b) {
        if (st.agent_in[b] && st.match_item[b] >= 0 && cov.agent_pi[b].is_zero()) {
          target[agent_code(b)] = 1;
        }
      }
      std::vector<int> path = find_path(view.digraph, {item_code(pruned, item)}, target);
      path.insert(path.begin(), agent_code(agent));
      toggle_along(pruned, next, path);
      require(next.match_item[agent] == item, "path exchange must hand the agent her purchase");
      next.match_item[agent] = -1;
      next.match_agent[item] = -1;
    }
    next.item_in[item] = 0;
  } else {
    // no purchase
    if (notion == WelfareNotion::ExPost) {
      require(in_r || (in_s && zero_dual),
              "in the ex-post scheme every covered agent with a live dual buys");
      if (!in_r) {
        // expose the declining zero-dual agent by shifting the matching
        // along a path from an unmatched agent to her
        std::vector<int> sources;
        for (int b = 0; b < pruned.n_agents(); ++b) {
          if (st.in_r(b)) sources.push_back(agent_code(b));
        }
        std::vector<char> target(view.digraph.present.size(), 0);
        target[agent_code(agent)] = 1;
        std::vector<int> path = find_path(view.digraph, sources, target);
        toggle_along(pruned, next, path);
        require(next.match_item[agent] < 0, "path exchange must expose the declining agent");
      }
    } else {
      require(in_r, "in the ex-ante scheme every covered agent buys");
    }
  }

  next.agent_in[agent] = 0;
  next.match_item[agent] = -1;
  next.t = st.t + 1;

  // bookkeeping invariants
  const Rational after = matching_weight_now(pruned, next);
  Rational expect = before;
  if (purchase) expect -= pruned.value(agent, *purchase);
  require(after == expect, "exchange must preserve the matching optimum");
  for (int a = 0; a < pruned.n_agents(); ++a) {
    if (next.in_r(a)) require(cov.agent_pi[a].is_zero(), "unmatched agents must keep dual zero");
  }
  for (int i = 0; i < pruned.n_items(); ++i) {
    if (next.item_in[i]) {
      int a = next.match_agent[i];
      require(a >= 0 && next.agent_in[a], "every remaining item must stay matched");
      require(cov.is_tight(pruned, a, i), "the matching must stay on tight edges");
    }
  }
  return next;
}

Trace run_welfare_scheme(const Market& market, WelfareNotion notion,
                         const std::vector<AgentId>& order, TiePolicy& tie) {
  auto [pruned, removed] = prune_uncovered_items(market);
  const MarketAnalysis analysis = analyze_market(pruned);
  const Covering cov = refined_covering(pruned, analysis);
  const PricingParameters params = compute_parameters(pruned, cov);

  Trace trace;
  trace.market = pruned;
  if (static_cast<int>(order.size()) != pruned.n_agents()) {
    throw std::invalid_argument("arrival order must cover every agent");
  }

  DynamicState st = initial_state(pruned, cov, max_weight_matching(pruned));
  std::map<int, Rational> prev_prices;
  std::vector<char> prev_s;
  try {
    for (const AgentId& id : order) {
      int agent = pruned.agent_index(id);
      if (agent < 0) throw std::invalid_argument("arrival order names unknown agent '" + id + "'");
      StepView view = prepare_step(pruned, cov, params, st, notion);

      // price monotonicity and shrinking reach sets, step over step
      for (const auto& [i, p] : view.prices) {
        auto it = prev_prices.find(i);
        if (it != prev_prices.end()) {
          bool ok = notion == WelfareNotion::ExPost ? p <= it->second : p >= it->second;
          require(ok, "per-item prices must move monotonically");
        }
      }
      if (!prev_s.empty()) {
        for (std::size_t v = 0; v < view.in_s.size(); ++v) {
          require(!view.in_s[v] || prev_s[v], "the reach set must only shrink");
        }
      }
      prev_prices = view.prices;
      prev_s = view.in_s;

      TraceStep step;
      step.agent = id;
      for (int i = 0; i < pruned.n_items(); ++i) {
        if (st.item_in[i]) {
          step.available.push_back(pruned.item(i));
          step.offers[pruned.item(i)] = view.prices.at(i);
        }
      }
      std::optional<int> choice = agent_choice(pruned, view.prices, agent, tie);
      if (choice) step.purchase = pruned.item(*choice);
      trace.steps.push_back(std::move(step));

      st = update_after_purchase(pruned, cov, view, st, notion, agent, choice);
    }
  } catch (const std::logic_error& e) {
    throw SchemeFailure(e.what(), trace);
  }
  return trace;
}

}  // namespace efdp
