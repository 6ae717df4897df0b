#include <catch_amalgamated.hpp>

#include "layergraph/gadgets.hpp"
#include "layergraph/rational.hpp"

using namespace layergraph;

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("3/5").value() == Rational(3) * Rational(BigInt(1), BigInt(5)));
  CHECK(Rational::parse("1.92").value() == Rational(BigInt(192), BigInt(100)));
  CHECK(Rational::parse("7").value() == Rational(7));
  CHECK(Rational::parse("-3/4").value() < Rational(0));
  CHECK(Rational::parse(" 2/3 ").has_value());
  CHECK_FALSE(Rational::parse("abc").has_value());
  CHECK_FALSE(Rational::parse("1/0").has_value());
  CHECK_FALSE(Rational::parse("1.").has_value());
}

TEST_CASE("rational from_double is exact") {
  const Rational half = Rational::from_double(0.5);
  CHECK(half == Rational(BigInt(1), BigInt(2)));
  const Rational x = Rational::from_double(0.6);
  // 0.6 is not exactly representable; its dyadic value is slightly below 3/5.
  CHECK(x != Rational(BigInt(3), BigInt(5)));
  CHECK((x - Rational(BigInt(3), BigInt(5))).to_double() == Catch::Approx(0.0).margin(1e-16));
  CHECK(Rational::from_double(3.0) == Rational(3));
}

TEST_CASE("rational floor and fractional part") {
  const Rational r = Rational::parse("192/100").value();
  CHECK(r.floor_ll() == 1);
  CHECK(r.fractional_part() == Rational(BigInt(92), BigInt(100)));
  CHECK(Rational(3).fractional_part() == Rational(0));
  CHECK(Rational::parse("-3/2").value().floor_ll() == -2);
}

TEST_CASE("comb threshold strings reduce") {
  CHECK(comb_threshold_string(3, 2) == "sqrt(7)/4");
  CHECK(comb_threshold_string(1, 1) == "sqrt(3)/2");
  CHECK(comb_threshold_string(4, 5) == "sqrt(21)/5");   // sqrt(84)/10
  CHECK(comb_threshold_string(6, 5) == "4/5");          // sqrt(64)/10
}

TEST_CASE("exact comparisons of squared widths") {
  const Rational eps = Rational::parse("92/100").value();
  CHECK(eps.squared() >= comb_min_width_squared(4, 5));
  const Rational eps2 = Rational::parse("91/100").value();
  CHECK_FALSE(eps2.squared() >= comb_min_width_squared(4, 5));
}
