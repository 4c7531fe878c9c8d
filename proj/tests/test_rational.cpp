#include <catch2/catch_amalgamated.hpp>

#include "sopt/rational.hpp"

using namespace sopt;

TEST_CASE("rational parsing accepts canonical and non-canonical forms") {
    CHECK(parse_rational("0") == 0);
    CHECK(parse_rational("7") == 7);
    CHECK(parse_rational("-3") == -3);
    CHECK(parse_rational("1/2") == rat(1, 2));
    CHECK(parse_rational("6/4") == rat(3, 2));
    CHECK(parse_rational("-7/21") == rat(-1, 3));
    CHECK(parse_rational("-0/5") == 0);
    CHECK(parse_rational("123456789123456789/3") == Rational(Int("41152263041152263")));
}

TEST_CASE("rational parsing rejects malformed input") {
    for (const char* bad : {"", " ", "1/0", "0/0", "1.5", "a/b", "1/", "/2", "1//2", "+1",
                            "1/-2", "--1", " 1", "1 ", "1e3", "0x10"}) {
        CHECK_THROWS_AS(parse_rational(bad), ParseError);
    }
}

TEST_CASE("rational printing is canonical") {
    CHECK(to_string(Rational(0)) == "0");
    CHECK(to_string(rat(4, 2)) == "2");
    CHECK(to_string(rat(1, 2)) == "1/2");
    CHECK(to_string(rat(-6, 4)) == "-3/2");
    CHECK(to_string(parse_rational("10/15")) == "2/3");
}

TEST_CASE("parse and print round-trip") {
    for (long long n = -12; n <= 12; ++n) {
        for (long long d = 1; d <= 9; ++d) {
            Rational r = rat(n, d);
            CHECK(parse_rational(to_string(r)) == r);
        }
    }
}

TEST_CASE("exact arithmetic has no drift") {
    // 1/3 summed three times is exactly 1
    Rational third = rat(1, 3);
    CHECK(third + third + third == 1);

    // repeated halving and re-doubling returns exactly to start
    Rational x = rat(355, 113);
    Rational y = x;
    for (int i = 0; i < 200; ++i) {
        y /= 2;
    }
    for (int i = 0; i < 200; ++i) {
        y *= 2;
    }
    CHECK(y == x);
}

TEST_CASE("vector helpers") {
    RVector a = {rat(1, 2), rat(1, 3), rat(1, 6)};
    RVector b = {1, 2, 3};
    CHECK(sum(a) == 1);
    CHECK(dot(a, b) == rat(5, 3));
    CHECK_THROWS_AS(dot(a, RVector{1, 2}), DimensionMismatch);
    CHECK(is_zero(RVector{0, 0}));
    CHECK_FALSE(is_zero(a));
    CHECK(to_string(a) == "(1/2, 1/3, 1/6)");
}
