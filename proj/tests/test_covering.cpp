#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "efdp/covering.hpp"
#include "efdp/generators.hpp"
#include "fixtures.hpp"

using namespace efdp;
using efdp::testing::battery_market;
using efdp::testing::make_m1;

namespace {

void check_feasible(const Market& m, const Covering& cov) {
  for (int a = 0; a < m.n_agents(); ++a) CHECK(cov.agent_pi[a].sign() >= 0);
  for (int i = 0; i < m.n_items(); ++i) CHECK(cov.item_pi[i].sign() >= 0);
  for (int a = 0; a < m.n_agents(); ++a) {
    for (int i = 0; i < m.n_items(); ++i) {
      CHECK(cov.agent_pi[a] + cov.item_pi[i] >= m.value(a, i));
    }
  }
  CHECK(cov.total() == opt_weight(m));
}

void check_refined(const Market& m, const MarketAnalysis& analysis, const Covering& cov) {
  check_feasible(m, cov);
  for (int a = 0; a < m.n_agents(); ++a) {
    for (int i = 0; i < m.n_items(); ++i) {
      CHECK(cov.is_tight(m, a, i) == (analysis.legal.count({a, i}) == 1));
    }
  }
  for (int a = 0; a < m.n_agents(); ++a) {
    CHECK(cov.agent_pi[a].is_zero() == (analysis.always_covered_agents.count(a) == 0));
  }
  for (int i = 0; i < m.n_items(); ++i) {
    CHECK(cov.item_pi[i].is_zero() == (analysis.always_covered_items.count(i) == 0));
  }
}

}  // namespace

TEST_CASE("difference solver: simple feasible and infeasible systems") {
  DifferenceConstraintSystem sys;
  sys.n_vars = 1;
  sys.add_lower(0, Rational(1));   // x >= 1
  sys.add_upper(0, Rational(2));   // x <= 2
  DiffSolution sol = solve_difference_constraints(sys);
  REQUIRE(sol.feasible);
  CHECK(sol.value[0] >= Rational(1));
  CHECK(sol.value[0] <= Rational(2));

  DifferenceConstraintSystem bad;
  bad.n_vars = 2;
  bad.add(0, 1, Rational(1));  // x - y >= 1
  bad.add(1, 0, Rational(0));  // y - x >= 0
  DiffSolution nope = solve_difference_constraints(bad);
  REQUIRE(!nope.feasible);
  REQUIRE(!nope.witness_cycle.empty());
  Rational around(0);
  for (int k : nope.witness_cycle) around += bad.constraints[k].c;
  CHECK(around > Rational(0));
}

TEST_CASE("difference solver satisfies every constraint it accepts") {
  // the m1 covering constraints, encoded by hand
  DifferenceConstraintSystem sys;
  sys.n_vars = 4;  // pi(a1), pi(a2), y(i1) = -pi(i1), y(i2)
  auto a1 = 0, a2 = 1, y1 = 2, y2 = 3;
  sys.add(a1, y1, Rational(3));
  sys.add(y1, a1, Rational(-3));
  sys.add(a2, y2, Rational(2));
  sys.add(y2, a2, Rational(-2));
  sys.add(a1, y2, Rational(2));   // slack >= 1 over value 1
  sys.add(a2, y1, Rational(3));   // slack >= 1 over value 2
  sys.add_lower(a1, Rational(1));
  sys.add_lower(a2, Rational(1));
  sys.add_upper(y1, Rational(-1));
  sys.add_upper(y2, Rational(-1));
  DiffSolution sol = solve_difference_constraints(sys);
  REQUIRE(sol.feasible);
  for (const auto& con : sys.constraints) {
    Rational x = con.x == kZeroVar ? Rational(0) : sol.value[con.x];
    Rational y = con.y == kZeroVar ? Rational(0) : sol.value[con.y];
    CHECK(x - y >= con.c);
  }
}

TEST_CASE("optimal coverings are feasible with total equal to the optimum") {
  check_feasible(make_m1(), optimal_covering(make_m1()));

  Market single({"a"}, {"i"});
  single.set_value(0, 0, Rational(4));
  Covering c = optimal_covering(single);
  CHECK(c.agent_pi[0] + c.item_pi[0] == Rational(4));

  Market zeros = gen_random(2, 3, 0, 1);
  Covering z = optimal_covering(zeros);
  CHECK(z.total().is_zero());

  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Market m = battery_market(seed);
    check_feasible(m, optimal_covering(m));
  }
}

TEST_CASE("the refined covering of m1 is the forced one") {
  Market m = make_m1();
  MarketAnalysis analysis = analyze_market(m);
  Covering cov = refined_covering(m, analysis);
  check_refined(m, analysis, cov);
  CHECK(cov.item_pi[0] == Rational(2));
  CHECK(cov.item_pi[1] == Rational(1));
  CHECK(cov.agent_pi[0] == Rational(1));
  CHECK(cov.agent_pi[1] == Rational(1));
}

TEST_CASE("refined covering of the cyclic instance keeps every unit edge tight") {
  Market cyc = gen_cyclic_triple();
  MarketAnalysis analysis = analyze_market(cyc);
  Covering cov = refined_covering(cyc, analysis);
  check_refined(cyc, analysis, cov);
  // all six unit edges are legal, so every dual is interior
  for (int a = 0; a < 3; ++a) CHECK(cov.agent_pi[a].sign() > 0);
}

TEST_CASE("two agents sharing one item push the agent duals to zero") {
  Market duel = efdp::testing::make_contested_single();
  MarketAnalysis analysis = analyze_market(duel);
  Covering cov = refined_covering(duel, analysis);
  check_refined(duel, analysis, cov);
  CHECK(cov.item_pi[0] == Rational(3));
  CHECK(cov.agent_pi[0].is_zero());
  CHECK(cov.agent_pi[1].is_zero());
}

TEST_CASE("refined covering rejects unpruned markets and holds on the pruned battery") {
  Market twins({"a"}, {"i1", "i2"});
  twins.set_value(0, 0, Rational(4));
  twins.set_value(0, 1, Rational(4));
  CHECK_THROWS_AS(refined_covering(twins), std::invalid_argument);

  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Market m = prune_uncovered_items(battery_market(seed)).first;
    MarketAnalysis analysis = analyze_market(m);
    check_refined(m, analysis, refined_covering(m, analysis));
  }
}

TEST_CASE("pricing parameters of m1 follow the quarter rule") {
  Market m = make_m1();
  Covering cov = refined_covering(m);
  PricingParameters p = compute_parameters(m, cov);
  CHECK(p.delta == Rational(1, 4));
  CHECK(p.epsilon == Rational(1, 64));
}

TEST_CASE("pricing parameters respect the strict separation bounds") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Market m = prune_uncovered_items(battery_market(seed)).first;
    Covering cov = refined_covering(m);
    PricingParameters p = compute_parameters(m, cov);
    CHECK(p.delta.sign() > 0);
    const Rational two_delta = Rational(2) * p.delta;
    for (int a = 0; a < m.n_agents(); ++a) {
      for (int i = 0; i < m.n_items(); ++i) {
        Rational slack = cov.agent_pi[a] + cov.item_pi[i] - m.value(a, i);
        if (slack.sign() > 0) CHECK(two_delta < slack);
      }
    }
    for (int i = 0; i < m.n_items(); ++i) CHECK(two_delta < cov.item_pi[i]);
    for (int a = 0; a < m.n_agents(); ++a) {
      if (cov.agent_pi[a].sign() > 0) CHECK(two_delta < cov.agent_pi[a]);
    }
    const int n = m.n_agents();
    CHECK(p.epsilon * Rational(n) * pow2(n) < p.delta);
  }
}

TEST_CASE("degenerate markets fall back to delta = 1") {
  Market nothing({"a1", "a2"}, {});
  Covering cov = refined_covering(nothing);
  PricingParameters p = compute_parameters(nothing, cov);
  CHECK(p.delta == Rational(1));
  CHECK(p.epsilon == Rational(1, 16));  // 1 / (2 * 2 * 4)

  Market lone({"a"}, {"i"});
  lone.set_value(0, 0, Rational(4));
  Covering lc = refined_covering(lone);
  PricingParameters lp = compute_parameters(lone, lc);
  // no non-tight edge: the bound comes from the duals alone
  CHECK(lp.delta.sign() > 0);
  CHECK(Rational(2) * lp.delta < min(lc.item_pi[0], lc.agent_pi[0].sign() > 0
                                                        ? lc.agent_pi[0]
                                                        : lc.item_pi[0]));
}
