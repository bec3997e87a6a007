#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "efdp/envy.hpp"
#include "efdp/generators.hpp"
#include "fixtures.hpp"

using namespace efdp;
using efdp::testing::make_m1;

namespace {

// Hand-rolled trace generator: structurally valid, otherwise arbitrary.
Trace random_trace(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Market m = gen_random(3, 4, 5, seed * 977 + 1);
  Trace t;
  t.market = m;
  std::vector<int> order{0, 1, 2};
  for (std::size_t i = 3; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  std::vector<char> in(m.n_items(), 1);
  for (int a : order) {
    TraceStep step;
    step.agent = m.agent(a);
    std::vector<int> buyable;
    for (int i = 0; i < m.n_items(); ++i) {
      if (!in[i]) continue;
      step.available.push_back(m.item(i));
      if (rng() % 4 == 0) {
        step.offers[m.item(i)] = std::nullopt;
      } else {
        step.offers[m.item(i)] = Rational(static_cast<long>(rng() % 13), 2);
        buyable.push_back(i);
      }
    }
    if (!buyable.empty() && rng() % 3 != 0) {
      int pick = buyable[rng() % buyable.size()];
      step.purchase = m.item(pick);
      in[pick] = 0;
    }
    t.steps.push_back(std::move(step));
  }
  return t;
}

Trace constant_price_full_sale(const Market& m, const std::vector<Rational>& prices,
                               const std::vector<int>& buys) {
  Trace t;
  t.market = m;
  std::vector<char> in(m.n_items(), 1);
  for (int a = 0; a < m.n_agents(); ++a) {
    TraceStep step;
    step.agent = m.agent(a);
    for (int i = 0; i < m.n_items(); ++i) {
      if (in[i]) {
        step.available.push_back(m.item(i));
        step.offers[m.item(i)] = prices[i];
      }
    }
    if (buys[a] >= 0) {
      step.purchase = m.item(buys[a]);
      in[buys[a]] = 0;
    }
    t.steps.push_back(std::move(step));
  }
  return t;
}

}  // namespace

TEST_CASE("comparison windows per notion") {
  CHECK(time_window(EnvyNotion::Strong, 2, 4) == std::pair<int, int>{1, 4});
  CHECK(time_window(EnvyNotion::Weak, 3, 5) == std::pair<int, int>{3, 3});
  CHECK(time_window(EnvyNotion::Strong, 1, 1) == std::pair<int, int>{1, 1});
  // ex-post looks back from the arrival, ex-ante looks forward; the pricing
  // schemes keep the unseen side safe through monotone prices
  CHECK(time_window(EnvyNotion::ExPost, 2, 4) == std::pair<int, int>{1, 2});
  CHECK(time_window(EnvyNotion::ExAnte, 2, 4) == std::pair<int, int>{2, 4});
  // windows nest: weak inside both one-sided notions inside strong
  for (int pos = 1; pos <= 4; ++pos) {
    auto strong = time_window(EnvyNotion::Strong, pos, 4);
    auto weak = time_window(EnvyNotion::Weak, pos, 4);
    for (EnvyNotion n : {EnvyNotion::ExPost, EnvyNotion::ExAnte}) {
      auto w = time_window(n, pos, 4);
      CHECK(strong.first <= w.first);
      CHECK(w.second <= strong.second);
      CHECK(w.first <= weak.first);
      CHECK(weak.second <= w.second);
    }
  }
}

TEST_CASE("a clean constant-price sale verifies under every notion") {
  // m1 at the market-clearing prices (3, 2); both agents buy their item
  Trace t = constant_price_full_sale(make_m1(), {Rational(3), Rational(2)}, {0, 1});
  for (EnvyNotion n :
       {EnvyNotion::Strong, EnvyNotion::ExPost, EnvyNotion::ExAnte, EnvyNotion::Weak}) {
    CHECK(!verify_envy_free(t, n));
  }
  CHECK(social_welfare(t) == Rational(5));
  CHECK(revenue(t) == Rational(5));
}

TEST_CASE("a price drop after a dear purchase is an ex-ante violation for the buyer") {
  // a1 pays 3 for i1; afterwards i2 goes for 1/2, which a1 values at 1
  Trace t;
  t.market = make_m1();
  TraceStep s1;
  s1.agent = "a1";
  s1.available = {"i1", "i2"};
  s1.offers["i1"] = Rational(3);
  s1.offers["i2"] = Rational(4);
  s1.purchase = "i1";
  TraceStep s2;
  s2.agent = "a2";
  s2.available = {"i2"};
  s2.offers["i2"] = Rational(1, 2);
  s2.purchase = "i2";
  t.steps = {s1, s2};

  auto w = verify_envy_free(t, EnvyNotion::ExAnte);
  REQUIRE(w.has_value());
  CHECK(w->agent == "a1");
  CHECK(w->step == 2);
  CHECK(w->item == "i2");
  CHECK(w->gap == Rational(1, 2));
  CHECK(verify_envy_free(t, EnvyNotion::Strong).has_value());
  // her own step was fine, so the backward-looking notions pass
  CHECK(!verify_envy_free(t, EnvyNotion::ExPost));
  CHECK(!verify_envy_free(t, EnvyNotion::Weak));
}

TEST_CASE("a bargain before a dear purchase is an ex-post violation") {
  // i2 is cheap at step 1 but a2 only buys it at step 2, dearer
  Trace t;
  t.market = make_m1();
  TraceStep s1;
  s1.agent = "a1";
  s1.available = {"i1", "i2"};
  s1.offers["i1"] = Rational(2);
  s1.offers["i2"] = Rational(1, 2);
  s1.purchase = "i1";
  TraceStep s2;
  s2.agent = "a2";
  s2.available = {"i2"};
  s2.offers["i2"] = Rational(3, 2);
  s2.purchase = "i2";
  t.steps = {s1, s2};

  CHECK(!verify_envy_free(t, EnvyNotion::Weak));
  auto w = verify_envy_free(t, EnvyNotion::ExPost);
  REQUIRE(w.has_value());
  CHECK(w->agent == "a2");
  CHECK(w->step == 1);
  CHECK(w->item == "i2");
  CHECK(w->gap == Rational(1));
}

TEST_CASE("negative own utility and positive leftover utility are violations") {
  // overpaying is flagged at the buyer's own step
  Trace t;
  t.market = make_m1();
  TraceStep s1;
  s1.agent = "a1";
  s1.available = {"i1", "i2"};
  s1.offers["i1"] = Rational(4);
  s1.offers["i2"] = std::nullopt;
  s1.purchase = "i1";
  TraceStep s2;
  s2.agent = "a2";
  s2.available = {"i2"};
  s2.offers["i2"] = std::nullopt;
  t.steps = {s1, s2};
  auto w = verify_envy_free(t, EnvyNotion::Weak);
  REQUIRE(w.has_value());
  CHECK(w->agent == "a1");

  // an empty-handed agent must not see positive utility anywhere in her window
  Trace u;
  u.market = make_m1();
  TraceStep r1;
  r1.agent = "a1";
  r1.available = {"i1", "i2"};
  r1.offers["i1"] = Rational(1);  // utility 2 for a1, never bought
  r1.offers["i2"] = std::nullopt;
  TraceStep r2;
  r2.agent = "a2";
  r2.available = {"i1", "i2"};
  r2.offers["i1"] = std::nullopt;
  r2.offers["i2"] = std::nullopt;
  u.steps = {r1, r2};
  auto v = verify_envy_free(u, EnvyNotion::Weak);
  REQUIRE(v.has_value());
  CHECK(v->agent == "a1");
  CHECK(v->item == "i1");
}

TEST_CASE("NOT_OFFERED items never create envy") {
  Trace t;
  t.market = make_m1();
  TraceStep s1;
  s1.agent = "a1";
  s1.available = {"i1", "i2"};
  s1.offers["i1"] = Rational(3);
  s1.offers["i2"] = std::nullopt;  // a bargain, if it were for sale
  s1.purchase = "i1";
  TraceStep s2;
  s2.agent = "a2";
  s2.available = {"i2"};
  s2.offers["i2"] = Rational(2);
  s2.purchase = "i2";
  t.steps = {s1, s2};
  for (EnvyNotion n :
       {EnvyNotion::Strong, EnvyNotion::ExPost, EnvyNotion::ExAnte, EnvyNotion::Weak}) {
    CHECK(!verify_envy_free(t, n));
  }
}

TEST_CASE("window nesting: stronger passes imply weaker passes on random traces") {
  int strong_ok = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Trace t = random_trace(seed);
    bool strong = !verify_envy_free(t, EnvyNotion::Strong);
    bool expost = !verify_envy_free(t, EnvyNotion::ExPost);
    bool exante = !verify_envy_free(t, EnvyNotion::ExAnte);
    bool weak = !verify_envy_free(t, EnvyNotion::Weak);
    if (strong) {
      ++strong_ok;
      CHECK(expost);
      CHECK(exante);
    }
    if (expost) CHECK(weak);
    if (exante) CHECK(weak);
  }
  CHECK(strong_ok > 0);  // the battery must exercise the implication
}

TEST_CASE("constant offers collapse strong to weak") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Market m = gen_random(3, 3, 4, seed);
    std::vector<Rational> prices;
    for (int i = 0; i < 3; ++i) prices.emplace_back(static_cast<long>(rng() % 9), 2);
    std::vector<int> buys(3, -1);
    std::vector<char> used(3, 0);
    for (int a = 0; a < 3; ++a) {
      int pick = static_cast<int>(rng() % 4);
      if (pick < 3 && !used[pick]) {
        buys[a] = pick;
        used[pick] = 1;
      }
    }
    Trace t = constant_price_full_sale(m, prices, buys);
    CHECK(!verify_envy_free(t, EnvyNotion::Strong) == !verify_envy_free(t, EnvyNotion::Weak));
  }
}

TEST_CASE("objectives sum purchases and sale prices") {
  Trace none = constant_price_full_sale(make_m1(), {Rational(10), Rational(10)}, {-1, -1});
  CHECK(social_welfare(none).is_zero());
  CHECK(revenue(none).is_zero());

  Market cyc = gen_cyclic_triple();
  Trace full = constant_price_full_sale(cyc, {Rational(1), Rational(1), Rational(1)}, {0, 1, 2});
  CHECK(social_welfare(full) == Rational(3));
  CHECK(revenue(full) == Rational(3));
}

TEST_CASE("trace json round-trips and malformed traces are rejected") {
  Trace t = constant_price_full_sale(make_m1(), {Rational(3), Rational(2)}, {0, 1});
  t.steps[0].offers["i2"] = std::nullopt;  // mix in a sentinel
  t.steps[0].purchase = "i1";
  Trace back = trace_from_json(trace_to_json(t));
  CHECK(back.steps.size() == 2);
  CHECK(back.steps[0].offers.at("i2") == OfferPrice{});
  CHECK(back.steps[0].offers.at("i1") == OfferPrice{Rational(3)});
  CHECK(back.steps[1].purchase == std::optional<ItemId>{"i2"});
  check_trace_shape(back);

  CHECK_THROWS_AS(load_trace("{"), ParseError);
  CHECK_THROWS_AS(load_trace("{}"), ParseError);

  // structural violations: double arrival, buying a NOT_OFFERED item,
  // an item resurfacing after its sale
  Trace twice = t;
  twice.steps[1].agent = "a1";
  CHECK_THROWS_AS(check_trace_shape(twice), ParseError);

  Trace ghost = t;
  ghost.steps[0].purchase = "i2";
  CHECK_THROWS_AS(check_trace_shape(ghost), ParseError);

  Trace zombie = t;
  zombie.steps[1].available = {"i1", "i2"};
  zombie.steps[1].offers["i1"] = Rational(1);
  CHECK_THROWS_AS(check_trace_shape(zombie), ParseError);
}
