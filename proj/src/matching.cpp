#include "efdp/matching.hpp"

#include <algorithm>

namespace efdp {

int Matching::item_of(int agent) const {
  for (const auto& [a, i] : pairs) {
    if (a == agent) return i;
  }
  return -1;
}

bool Matching::covers_item(int item) const {
  for (const auto& [a, i] : pairs) {
    if (i == item) return true;
  }
  return false;
}

Rational matching_weight(const Market& m, const Matching& match) {
  Rational w(0);
  for (const auto& [a, i] : match.pairs) w += m.value(a, i);
  return w;
}

namespace {

// Hungarian method (potentials form) for the min-cost perfect-on-rows
// assignment, exact arithmetic. Rows are agents; columns are the real items
// followed by one dummy column per agent at cost 0, so leaving an agent
// unmatched is always available and the optimum equals the maximum matching
// weight negated.
//
// Row order and column scan order are fixed, so the result is deterministic.
struct Assignment {
  Rational weight;
  std::vector<int> item_of_agent;  // -1 = unmatched
};

Assignment solve_assignment(const Market& m, const std::vector<char>& agent_on,
                            const std::vector<char>& item_on) {
  std::vector<int> rows, cols;
  for (int a = 0; a < m.n_agents(); ++a) {
    if (agent_on[a]) rows.push_back(a);
  }
  for (int i = 0; i < m.n_items(); ++i) {
    if (item_on[i]) cols.push_back(i);
  }
  const int n = static_cast<int>(rows.size());
  const int mm = static_cast<int>(cols.size()) + n;  // real columns + dummies

  Assignment result;
  result.weight = Rational(0);
  result.item_of_agent.assign(m.n_agents(), -1);
  if (n == 0) return result;

  auto cost = [&](int r, int c) -> Rational {
    if (c >= static_cast<int>(cols.size())) return Rational(0);
    return -m.value(rows[r], cols[c]);
  };

  Rational inf(1);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
      inf += m.value(rows[r], cols[c]);
    }
  }

  std::vector<Rational> u(n + 1, Rational(0)), v(mm + 1, Rational(0));
  std::vector<int> p(mm + 1, 0), way(mm + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<Rational> minv(mm + 1, inf);
    std::vector<char> used(mm + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      Rational delta = inf;
      for (int j = 1; j <= mm; ++j) {
        if (used[j]) continue;
        Rational cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= mm; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (int j = 1; j <= mm; ++j) {
    if (p[j] == 0 || j > static_cast<int>(cols.size())) continue;
    int agent = rows[p[j] - 1];
    int item = cols[j - 1];
    if (m.value(agent, item).is_zero()) continue;  // canonical: drop weightless pairs
    result.item_of_agent[agent] = item;
    result.weight += m.value(agent, item);
  }
  return result;
}

Assignment solve_full(const Market& m) {
  std::vector<char> agents(m.n_agents(), 1), items(m.n_items(), 1);
  return solve_assignment(m, agents, items);
}

}  // namespace

Matching max_weight_matching(const Market& m) {
  Assignment a = solve_full(m);
  Matching match;
  for (int agent = 0; agent < m.n_agents(); ++agent) {
    if (a.item_of_agent[agent] >= 0) match.pairs.emplace_back(agent, a.item_of_agent[agent]);
  }
  return match;
}

Rational opt_weight(const Market& m) { return solve_full(m).weight; }

std::set<std::pair<int, int>> legal_edges(const Market& m) {
  const Rational opt = opt_weight(m);
  std::set<std::pair<int, int>> legal;
  std::vector<char> agents(m.n_agents(), 1), items(m.n_items(), 1);
  for (int a = 0; a < m.n_agents(); ++a) {
    for (int i = 0; i < m.n_items(); ++i) {
      agents[a] = 0;
      items[i] = 0;
      Rational forced = m.value(a, i) + solve_assignment(m, agents, items).weight;
      agents[a] = 1;
      items[i] = 1;
      if (forced == opt) legal.insert({a, i});
    }
  }
  return legal;
}

std::pair<std::set<int>, std::set<int>> always_covered_vertices(const Market& m) {
  const Rational opt = opt_weight(m);
  std::set<int> cov_agents, cov_items;
  std::vector<char> agents(m.n_agents(), 1), items(m.n_items(), 1);
  for (int a = 0; a < m.n_agents(); ++a) {
    agents[a] = 0;
    if (solve_assignment(m, agents, items).weight < opt) cov_agents.insert(a);
    agents[a] = 1;
  }
  for (int i = 0; i < m.n_items(); ++i) {
    items[i] = 0;
    if (solve_assignment(m, agents, items).weight < opt) cov_items.insert(i);
    items[i] = 1;
  }
  return {cov_agents, cov_items};
}

MarketAnalysis analyze_market(const Market& m) {
  MarketAnalysis out;
  out.opt = opt_weight(m);
  out.legal = legal_edges(m);
  auto [ca, ci] = always_covered_vertices(m);
  out.always_covered_agents = std::move(ca);
  out.always_covered_items = std::move(ci);
  return out;
}

std::pair<Market, std::vector<ItemId>> prune_uncovered_items(const Market& m) {
  Market cur = m;
  std::vector<ItemId> removed;
  for (;;) {
    const Rational opt = opt_weight(cur);
    int drop = -1;
    for (int i = cur.n_items() - 1; i >= 0; --i) {
      if (opt_weight(cur.without_item(i)) == opt) {
        drop = i;
        break;
      }
    }
    if (drop < 0) break;
    removed.push_back(cur.item(drop));
    cur = cur.without_item(drop);
  }
  return {std::move(cur), std::move(removed)};
}

namespace {

void enumerate_rec(const Market& m, int agent, std::vector<char>& item_used,
                   std::vector<int>& assigned, Rational& weight, Rational& best,
                   std::vector<Matching>& out) {
  if (agent == m.n_agents()) {
    if (weight > best) {
      best = weight;
      out.clear();
    }
    if (weight == best) {
      Matching match;
      for (int a = 0; a < m.n_agents(); ++a) {
        if (assigned[a] >= 0) match.pairs.emplace_back(a, assigned[a]);
      }
      out.push_back(std::move(match));
    }
    return;
  }
  assigned[agent] = -1;
  enumerate_rec(m, agent + 1, item_used, assigned, weight, best, out);
  for (int i = 0; i < m.n_items(); ++i) {
    if (item_used[i]) continue;
    item_used[i] = 1;
    assigned[agent] = i;
    weight += m.value(agent, i);
    enumerate_rec(m, agent + 1, item_used, assigned, weight, best, out);
    weight -= m.value(agent, i);
    assigned[agent] = -1;
    item_used[i] = 0;
  }
}

}  // namespace

std::vector<Matching> enumerate_max_matchings(const Market& m, int max_side) {
  if (m.n_agents() > max_side || m.n_items() > max_side) {
    throw InstanceTooLarge("matching enumeration limited to " + std::to_string(max_side) +
                           " vertices per side");
  }
  std::vector<char> item_used(m.n_items(), 0);
  std::vector<int> assigned(m.n_agents(), -1);
  Rational weight(0), best(0);
  best -= Rational(1);  // below any achievable weight, so the empty matching registers
  std::vector<Matching> out;
  enumerate_rec(m, 0, item_used, assigned, weight, best, out);
  return out;
}

}  // namespace efdp
