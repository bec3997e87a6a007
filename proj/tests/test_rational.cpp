#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "efdp/rational.hpp"

using efdp::Rational;

TEST_CASE("parsing accepts integers and fractions, exactly") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK(Rational::parse("1/3") == Rational(1, 3));
  CHECK(Rational::parse("-6/4") == Rational(-3, 2));
  CHECK(Rational::parse("6/4") == Rational(3, 2));
  // a third is a third, not 0.333...
  CHECK(Rational::parse("1/3") * Rational(3) == Rational(1));
}

TEST_CASE("parsing rejects junk") {
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("a/b"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("/2"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("canonical form has lowest terms and positive denominator") {
  CHECK(Rational(2, 4).str() == "1/2");
  CHECK(Rational(3, -6).str() == "-1/2");
  CHECK(Rational(-8, 2).str() == "-4");
  CHECK(Rational(0, 5).str() == "0");
  CHECK(Rational(2, 4) == Rational(1, 2));
}

TEST_CASE("format/parse round-trips random values") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    long num = static_cast<long>(rng() % 2001) - 1000;
    long den = static_cast<long>(rng() % 999) + 1;
    Rational r(num, den);
    CHECK(Rational::parse(r.str()) == r);
  }
}

TEST_CASE("arithmetic is exact") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK((-a).str() == "-1/3");
  CHECK(a > b);
  CHECK(Rational(0).is_zero());
  CHECK_THROWS_AS(a / Rational(0), std::invalid_argument);
  // accumulation never drifts
  Rational sum(0);
  for (int i = 0; i < 300; ++i) sum += Rational(1, 300);
  CHECK(sum == Rational(1));
}

TEST_CASE("pow2 covers both directions") {
  CHECK(efdp::pow2(0) == Rational(1));
  CHECK(efdp::pow2(5) == Rational(32));
  CHECK(efdp::pow2(-3) == Rational(1, 8));
}
