#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "efdp/generators.hpp"
#include "efdp/matching.hpp"
#include "fixtures.hpp"

using namespace efdp;
using efdp::testing::battery_market;
using efdp::testing::edges_of;
using efdp::testing::make_m1;

TEST_CASE("reference instances match the enumeration oracle") {
  Market m1 = make_m1();
  auto all = enumerate_max_matchings(m1);
  REQUIRE(all.size() == 1);
  CHECK(matching_weight(m1, all.front()) == Rational(5));

  Matching solved = max_weight_matching(m1);
  CHECK(solved.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
  CHECK(matching_weight(m1, solved) == Rational(5));

  Market h3 = gen_harmonic(3);
  Matching mh = max_weight_matching(h3);
  CHECK(mh.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}});
  CHECK(matching_weight(h3, mh) == Rational(11, 6));
  CHECK(enumerate_max_matchings(h3).size() == 1);

  Market cyc = gen_cyclic_triple();
  auto cyc_all = enumerate_max_matchings(cyc);
  CHECK(cyc_all.size() == 2);  // the two fully shifted perfect matchings
  for (const auto& match : cyc_all) {
    CHECK(match.pairs.size() == 3);
    CHECK(matching_weight(cyc, match) == Rational(3));
  }

  Market zero({"a"}, {"i"});
  CHECK(opt_weight(zero) == Rational(0));
  CHECK(max_weight_matching(zero).pairs.empty());

  Market empty({}, {});
  auto empty_all = enumerate_max_matchings(empty);
  REQUIRE(empty_all.size() == 1);
  CHECK(empty_all.front().pairs.empty());
}

TEST_CASE("solver weight equals enumeration optimum on the random battery") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Market m = battery_market(seed);
    auto all = enumerate_max_matchings(m);
    REQUIRE(!all.empty());
    Rational best = matching_weight(m, all.front());
    for (const auto& match : all) CHECK(matching_weight(m, match) == best);
    CHECK(opt_weight(m) == best);
  }
}

TEST_CASE("legal edges are exactly the union over all maximum matchings") {
  Market m1 = make_m1();
  CHECK(legal_edges(m1) == std::set<std::pair<int, int>>{{0, 0}, {1, 1}});

  // in the cyclic instance every unit edge sits in one of the two matchings
  Market cyc = gen_cyclic_triple();
  auto legal = legal_edges(cyc);
  CHECK(legal.size() == 6);
  CHECK(legal == edges_of(enumerate_max_matchings(cyc)));

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Market m = battery_market(seed);
    CHECK(legal_edges(m) == edges_of(enumerate_max_matchings(m)));
  }
}

TEST_CASE("an indifferent agent's zero edges are legal when a matching includes them") {
  Market m({"a1", "a2"}, {"i1", "i2"});
  m.set_value(0, 0, Rational(4));  // a2 values everything at 0
  auto legal = legal_edges(m);
  auto union_edges = edges_of(enumerate_max_matchings(m));
  CHECK(legal == union_edges);
  CHECK(legal.count({1, 1}) == 1);  // extendable at zero weight
}

TEST_CASE("always-covered vertices agree with the enumeration intersection") {
  Market m1 = make_m1();
  auto [ca, ci] = always_covered_vertices(m1);
  CHECK(ca == std::set<int>{0, 1});
  CHECK(ci == std::set<int>{0, 1});

  auto [ha, hi] = always_covered_vertices(gen_harmonic(3));
  CHECK(ha.size() == 3);
  CHECK(hi.size() == 3);

  Market duel = testing::make_contested_single();
  auto [da, di] = always_covered_vertices(duel);
  CHECK(da.empty());
  CHECK(di == std::set<int>{0});

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Market m = battery_market(seed);
    auto all = enumerate_max_matchings(m);
    std::set<int> ia, ii;
    for (int a = 0; a < m.n_agents(); ++a) ia.insert(a);
    for (int i = 0; i < m.n_items(); ++i) ii.insert(i);
    for (const auto& match : all) {
      for (auto it = ia.begin(); it != ia.end();) {
        it = match.item_of(*it) < 0 ? ia.erase(it) : std::next(it);
      }
      for (auto it = ii.begin(); it != ii.end();) {
        it = !match.covers_item(*it) ? ii.erase(it) : std::next(it);
      }
    }
    auto [ra, ri] = always_covered_vertices(m);
    CHECK(ra == ia);
    CHECK(ri == ii);
  }
}

TEST_CASE("pruning drops skippable items deterministically and keeps the optimum") {
  auto [m1p, removed1] = prune_uncovered_items(make_m1());
  CHECK(removed1.empty());
  CHECK(m1p.n_items() == 2);

  Market with_dud({"a1", "a2"}, {"i1", "i2", "i3"});
  with_dud.set_value(0, 0, Rational(3));
  with_dud.set_value(0, 1, Rational(1));
  with_dud.set_value(1, 0, Rational(2));
  with_dud.set_value(1, 1, Rational(2));
  auto [pruned, removed] = prune_uncovered_items(with_dud);
  CHECK(removed == std::vector<ItemId>{"i3"});
  CHECK(opt_weight(pruned) == Rational(5));

  Market twins({"a"}, {"i1", "i2"});
  twins.set_value(0, 0, Rational(4));
  twins.set_value(0, 1, Rational(4));
  auto [tp, tr] = prune_uncovered_items(twins);
  CHECK(tr == std::vector<ItemId>{"i2"});  // larger id goes first
  CHECK(opt_weight(tp) == Rational(4));

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Market m = battery_market(seed);
    auto [p, r] = prune_uncovered_items(m);
    CHECK(opt_weight(p) == opt_weight(m));
    auto [pa, pi] = always_covered_vertices(p);
    CHECK(static_cast<int>(pi.size()) == p.n_items());
  }
}

TEST_CASE("enumeration refuses oversized instances") {
  Market big = gen_random(3, 3, 2, 5);
  CHECK_THROWS_AS(enumerate_max_matchings(big, 2), InstanceTooLarge);
}
