#include "efdp/covering.hpp"

#include <stdexcept>

namespace efdp {

Rational Covering::total() const {
  Rational t(0);
  for (const auto& p : agent_pi) t += p;
  for (const auto& p : item_pi) t += p;
  return t;
}

namespace {

// Variables 0..nA-1 are agent duals; nA..nA+nI-1 are the negated item
// duals y(i) = -pi(i), which turns the covering sums pi(a) + pi(i) into
// differences pi(a) - y(i) solvable by shortest paths.
struct VarMap {
  int n_agents;
  int agent(int a) const { return a; }
  int item(int i) const { return n_agents + i; }
};

Covering extract(const Market& m, const VarMap& vars, const DiffSolution& sol) {
  Covering cov;
  cov.agent_pi.reserve(m.n_agents());
  cov.item_pi.reserve(m.n_items());
  for (int a = 0; a < m.n_agents(); ++a) cov.agent_pi.push_back(sol.value[vars.agent(a)]);
  for (int i = 0; i < m.n_items(); ++i) cov.item_pi.push_back(-sol.value[vars.item(i)]);
  return cov;
}

void add_common(DifferenceConstraintSystem& sys, const Market& m, const VarMap& vars) {
  sys.n_vars = m.n_agents() + m.n_items();
  for (int a = 0; a < m.n_agents(); ++a) sys.add_lower(vars.agent(a), Rational(0));
  for (int i = 0; i < m.n_items(); ++i) sys.add_upper(vars.item(i), Rational(0));  // pi(i) >= 0
}

void check_covering(const Market& m, const Covering& cov) {
  for (int a = 0; a < m.n_agents(); ++a) {
    if (cov.agent_pi[a].sign() < 0) throw std::logic_error("covering: negative agent dual");
  }
  for (int i = 0; i < m.n_items(); ++i) {
    if (cov.item_pi[i].sign() < 0) throw std::logic_error("covering: negative item dual");
  }
  for (int a = 0; a < m.n_agents(); ++a) {
    for (int i = 0; i < m.n_items(); ++i) {
      if (cov.agent_pi[a] + cov.item_pi[i] < m.value(a, i)) {
        throw std::logic_error("covering: uncovered edge");
      }
    }
  }
  if (cov.total() != opt_weight(m)) throw std::logic_error("covering: total differs from optimum");
}

}  // namespace

Covering optimal_covering(const Market& m) {
  const Matching match = max_weight_matching(m);
  VarMap vars{m.n_agents()};
  DifferenceConstraintSystem sys;
  add_common(sys, m, vars);
  for (int a = 0; a < m.n_agents(); ++a) {
    for (int i = 0; i < m.n_items(); ++i) {
      // pi(a) - y(i) >= v
      sys.add(vars.agent(a), vars.item(i), m.value(a, i));
    }
  }
  std::vector<char> agent_matched(m.n_agents(), 0), item_matched(m.n_items(), 0);
  for (const auto& [a, i] : match.pairs) {
    agent_matched[a] = 1;
    item_matched[i] = 1;
    // tight on the matching: pi(a) - y(i) <= v as well
    sys.add(vars.item(i), vars.agent(a), -m.value(a, i));
  }
  for (int a = 0; a < m.n_agents(); ++a) {
    if (!agent_matched[a]) sys.add_equal(vars.agent(a), Rational(0));
  }
  for (int i = 0; i < m.n_items(); ++i) {
    if (!item_matched[i]) sys.add_equal(vars.item(i), Rational(0));  // y = 0 is pi = 0
  }
  DiffSolution sol = solve_difference_constraints(sys);
  if (!sol.feasible) throw std::logic_error("optimal covering system infeasible");
  Covering cov = extract(m, vars, sol);
  check_covering(m, cov);
  return cov;
}

Covering refined_covering(const Market& m) { return refined_covering(m, analyze_market(m)); }

Covering refined_covering(const Market& m, const MarketAnalysis& analysis) {
  for (int i = 0; i < m.n_items(); ++i) {
    if (!analysis.always_covered_items.count(i)) {
      throw std::invalid_argument("refined covering requires a pruned market");
    }
  }
  VarMap vars{m.n_agents()};
  Rational gamma(1);
  for (int attempt = 0; attempt < 256; ++attempt, gamma /= Rational(2)) {
    DifferenceConstraintSystem sys;
    add_common(sys, m, vars);
    for (int a = 0; a < m.n_agents(); ++a) {
      for (int i = 0; i < m.n_items(); ++i) {
        if (analysis.legal.count({a, i})) {
          sys.add(vars.agent(a), vars.item(i), m.value(a, i));
          sys.add(vars.item(i), vars.agent(a), -m.value(a, i));
        } else {
          sys.add(vars.agent(a), vars.item(i), m.value(a, i) + gamma);
        }
      }
    }
    for (int a = 0; a < m.n_agents(); ++a) {
      if (analysis.always_covered_agents.count(a)) {
        sys.add_lower(vars.agent(a), gamma);
      } else {
        sys.add_equal(vars.agent(a), Rational(0));
      }
    }
    for (int i = 0; i < m.n_items(); ++i) {
      // items here are always covered; pi(i) >= gamma is -y >= gamma
      sys.add_upper(vars.item(i), -gamma);
    }
    DiffSolution sol = solve_difference_constraints(sys);
    if (!sol.feasible) continue;
    Covering cov = extract(m, vars, sol);
    check_covering(m, cov);
    return cov;
  }
  throw std::logic_error("no margin admits a refined covering; the guarantee is violated");
}

PricingParameters compute_parameters(const Market& m, const Covering& cov) {
  std::optional<Rational> bound;
  auto shrink = [&](const Rational& r) {
    if (!bound || r < *bound) bound = r;
  };
  for (int a = 0; a < m.n_agents(); ++a) {
    for (int i = 0; i < m.n_items(); ++i) {
      Rational slack = cov.agent_pi[a] + cov.item_pi[i] - m.value(a, i);
      if (slack.sign() > 0) shrink(slack);
    }
  }
  for (int i = 0; i < m.n_items(); ++i) {
    if (cov.item_pi[i].sign() > 0) shrink(cov.item_pi[i]);
  }
  for (int a = 0; a < m.n_agents(); ++a) {
    if (cov.agent_pi[a].sign() > 0) shrink(cov.agent_pi[a]);
  }
  PricingParameters params;
  params.delta = bound ? *bound / Rational(4) : Rational(1);
  const int n = m.n_agents();
  if (n == 0) {
    params.epsilon = params.delta;
  } else {
    params.epsilon = params.delta / (Rational(2) * Rational(n) * pow2(n));
  }
  return params;
}

}  // namespace efdp
