#include <catch2/catch_amalgamated.hpp>

#include "morrey/rational.hpp"

using morrey::Rational;

TEST_CASE("construction normalizes sign and gcd", "[rational]") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("arithmetic is exact", "[rational]") {
    const Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(-a == Rational(-1, 3));
    CHECK(a.reciprocal() == Rational(3));
    CHECK(Rational(0).reciprocal().is_infinite());
    CHECK(Rational::infinity().reciprocal() == Rational(0));
}

TEST_CASE("ordering including infinity", "[rational]") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1) < Rational(0));
    CHECK(Rational(5) < Rational::infinity());
    CHECK_FALSE(Rational::infinity() < Rational::infinity());
    CHECK(Rational::infinity() <= Rational::infinity());
    CHECK(morrey::min(Rational(1), Rational(1, 3)) == Rational(1, 3));
    CHECK(morrey::max(Rational(1), Rational::infinity()).is_infinite());
}

TEST_CASE("parse accepts fractions, decimals, integers, inf", "[rational]") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-2") == Rational(-2));
    CHECK(Rational::parse("0.4") == Rational(2, 5));
    CHECK(Rational::parse("-1.25") == Rational(-5, 4));
    CHECK(Rational::parse("inf").is_infinite());
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
}

TEST_CASE("from_double snaps to small denominators", "[rational]") {
    CHECK(Rational::from_double(0.5).value() == Rational(1, 2));
    CHECK(Rational::from_double(0.4).value() == Rational(2, 5));
    CHECK(Rational::from_double(1.0 / 3.0).value() == Rational(1, 3));
    CHECK(Rational::from_double(7.0).value() == Rational(7));
    const auto pi = Rational::from_double(3.14159265358979312, 100, 1e-12);
    CHECK_FALSE(pi.has_value());
}

TEST_CASE("pow2 matches closed forms", "[rational]") {
    CHECK(morrey::pow2(Rational(3)) == 8.0);
    CHECK(morrey::pow2(Rational(-1)) == 0.5);
    CHECK(morrey::pow2(Rational(1, 2)) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(morrey::pow2(Rational(3, 4)) == Catch::Approx(std::pow(2.0, 0.75)).epsilon(1e-15));
    CHECK(std::isinf(morrey::pow2(Rational::infinity())));
}

TEST_CASE("overflow is detected, not wrapped", "[rational]") {
    const Rational big(1000000007LL, 1);
    const Rational huge = big * big;  // fits in 128-bit intermediate and 64-bit result
    CHECK(huge.num() == 1000000014000000049LL);
    CHECK_THROWS_AS(huge * huge, std::overflow_error);
}
