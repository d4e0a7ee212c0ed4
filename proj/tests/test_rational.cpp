#include <catch2/catch_amalgamated.hpp>

#include <lcfib/rational.hpp>

using namespace lcfib;

TEST_CASE("rational construction normalizes") {
    CHECK(Rational(Int(6), Int(4)) == Rational(3, 2));
    CHECK(Rational(Int(-6), Int(4)) == Rational(-3, 2));
    CHECK(Rational(Int(6), Int(-4)) == Rational(-3, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(5).is_integer());
    CHECK_FALSE(Rational(5, 3).is_integer());
    CHECK_THROWS_AS(Rational(Int(1), Int(0)), InputError);
}

TEST_CASE("rational arithmetic") {
    CHECK(Rational(2, 9) + Rational(1, 3) == Rational(5, 9));
    CHECK(Rational(1) - Rational(44, 45) == Rational(1, 45));
    CHECK(Rational(3, 4) * Rational(2, 9) == Rational(1, 6));
    CHECK(Rational(3, 4) / Rational(9, 2) == Rational(1, 6));
    CHECK_THROWS_AS(Rational(1) / Rational(0), InputError);
    CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
    CHECK(Rational(2, 3).pow(0) == Rational(1));
    CHECK(-Rational(5, 7) == Rational(-5, 7));
    CHECK(abs(Rational(-5, 7)) == Rational(5, 7));
}

TEST_CASE("rational ordering") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(44, 45) <= Rational(44, 45));
    CHECK(Rational(1) > Rational(44, 45));
    CHECK(Rational(2, 9).sign() == 1);
    CHECK(Rational(-2, 9).sign() == -1);
    CHECK(Rational(0).sign() == 0);
}

TEST_CASE("rational parse and print round trip") {
    CHECK(Rational::parse("2/9") == Rational(2, 9));
    CHECK(Rational::parse("-3/6") == Rational(-1, 2));
    CHECK(Rational::parse("+7") == Rational(7));
    CHECK(Rational::parse("0") == Rational(0));
    CHECK(Rational(44, 45).str() == "44/45");
    CHECK(Rational(-3).str() == "-3");
    CHECK(Rational::parse(Rational(-22, 7).str()) == Rational(-22, 7));
    CHECK_THROWS_AS(Rational::parse(""), InputError);
    CHECK_THROWS_AS(Rational::parse("1/"), InputError);
    CHECK_THROWS_AS(Rational::parse("a/2"), InputError);
    CHECK_THROWS_AS(Rational::parse("1/0"), InputError);
    CHECK_THROWS_AS(Rational::parse("1.5"), InputError);
}

TEST_CASE("integer gcd and lcm helpers") {
    CHECK(gcd(Int(45), Int(9)) == 9);
    CHECK(gcd(Int(0), Int(7)) == 7);
    CHECK(lcm(Int(4), Int(6)) == 12);
    CHECK(lcm(Int(45), Int(9)) == 45);
}

TEST_CASE("min_multiplier is the lcm of denominators") {
    CHECK(min_multiplier({Rational(1, 45)}) == 45);
    CHECK(min_multiplier({Rational(1, 45), Rational(1, 3)}) == 45);
    CHECK(min_multiplier({Rational(1, 4), Rational(1, 6)}) == 12);
    CHECK(min_multiplier({Rational(3)}) == 1);
    CHECK_THROWS_AS(min_multiplier({}), InputError);
}

TEST_CASE("prime sieve") {
    CHECK(primes_upto(20) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19});
    CHECK(primes_upto(2) == std::vector<std::int64_t>{2});
    CHECK(primes_upto(1).empty());
}
