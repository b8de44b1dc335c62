#include "spectrade/rational.hpp"
#include "spectrade/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace spectrade;

namespace {

Rational random_rational(SplitMix64& rng) {
    std::int64_t num = rng.between(-1000000, 1000000);
    std::int64_t den = rng.between(1, 1000000);
    return Rational(num, den);
}

}  // namespace

TEST_CASE("decimal parsing is exact") {
    CHECK(*parse_decimal("0") == Rational(0));
    CHECK(*parse_decimal("3") == Rational(3));
    CHECK(*parse_decimal("0.51") == Rational(51, 100));
    CHECK(*parse_decimal("12.5") == Rational(25, 2));
    CHECK(*parse_decimal("-2.25") == Rational(-9, 4));
    CHECK(*parse_decimal("+0.1") == Rational(1, 10));
    CHECK(*parse_decimal("0.000001") == Rational(1, 1000000));
    CHECK(*parse_decimal("10.000000000000000001") ==
          Rational(BigInt("10000000000000000001"), BigInt("1000000000000000000")));
    // Digit runs with leading zeros must stay decimal, not turn octal.
    CHECK(*parse_decimal("60.0891") == Rational(600891, 10000));
    CHECK(*parse_decimal("0.012") == Rational(3, 250));
    CHECK(*parse_decimal("0.098") == Rational(49, 500));
    CHECK(*parse_decimal("007") == Rational(7));
    CHECK(*parse_decimal("-0.0625") == Rational(-1, 16));
}

TEST_CASE("decimal parsing rejects junk") {
    CHECK_FALSE(parse_decimal(""));
    CHECK_FALSE(parse_decimal("."));
    CHECK_FALSE(parse_decimal("3."));
    CHECK_FALSE(parse_decimal(".5"));
    CHECK_FALSE(parse_decimal("1e5"));
    CHECK_FALSE(parse_decimal("1.2.3"));
    CHECK_FALSE(parse_decimal("--1"));
    CHECK_FALSE(parse_decimal("1 2"));
    CHECK_FALSE(parse_decimal("abc"));
}

TEST_CASE("exact formatting round trips") {
    for (const char* text : {"0", "3", "0.51", "12.5", "-2.25", "0.000001",
                             "123456789.987654321"}) {
        Rational value = *parse_decimal(text);
        CHECK(*parse_decimal(format_decimal_exact(value)) == value);
    }
    CHECK(format_decimal_exact(Rational(25, 2)) == "12.5");
    CHECK(format_decimal_exact(Rational(1, 8)) == "0.125");
    CHECK(format_decimal_exact(Rational(-3, 4)) == "-0.75");
    CHECK(format_decimal_exact(Rational(7)) == "7");
    CHECK_THROWS_AS(format_decimal_exact(Rational(1, 3)), std::invalid_argument);
}

TEST_CASE("fixed formatting rounds half away from zero") {
    CHECK(format_decimal(Rational(1, 3), 6) == "0.333333");
    CHECK(format_decimal(Rational(2, 3), 6) == "0.666667");
    CHECK(format_decimal(Rational(1, 2), 0) == "1");
    CHECK(format_decimal(Rational(-1, 2), 0) == "-1");
    CHECK(format_decimal(Rational(5, 46), 6) == "0.108696");
    CHECK(format_decimal(Rational(82), 6) == "82.000000");
    CHECK(format_decimal(Rational(0), 6) == "0.000000");
    CHECK(format_decimal(Rational(1, 2000000), 6) == "0.000001");
    CHECK(format_decimal(Rational(-1, 3), 2) == "-0.33");
}

TEST_CASE("trimmed formatting drops trailing zeros") {
    CHECK(format_decimal_trimmed(Rational(82), 6) == "82");
    CHECK(format_decimal_trimmed(Rational(41, 3), 6) == "13.666667");
    CHECK(format_decimal_trimmed(Rational(1, 2), 6) == "0.5");
    CHECK(format_decimal_trimmed(Rational(0), 6) == "0");
}

TEST_CASE("arithmetic is exact over random triples") {
    SplitMix64 rng(20260816);
    for (int i = 0; i < 100000; ++i) {
        Rational a = random_rational(rng);
        Rational b = random_rational(rng);
        Rational c = random_rational(rng);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a + b) - b == a);
        std::int64_t k = rng.between(-1000, 1000);
        REQUIRE(a * k + b * k == (a + b) * k);
    }
}

TEST_CASE("tenth increments accumulate without drift") {
    Rational tenth(1, 10);
    Rational sum = 0;
    for (int i = 0; i < 1000; ++i) sum += tenth;
    CHECK(sum == Rational(100));
}
