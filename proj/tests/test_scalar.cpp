#include <doctest.h>

#include "isolattice/scalar.hpp"

using namespace isolattice;

TEST_CASE("rationals are kept in lowest terms") {
    CHECK(to_string(make_rational(6, -4)) == "-3/2");
    CHECK(to_string(make_rational(4, 2)) == "2");
    CHECK(to_string(parse_rational("10/4")) == "5/2");
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(parse_rational("3/1") == Rational(3));
    CHECK_THROWS_AS(make_rational(1, 0), InvalidArgument);
    CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
    CHECK_THROWS_AS(parse_rational("1/"), InvalidArgument);
    CHECK_THROWS_AS(parse_rational("abc"), InvalidArgument);
    CHECK_THROWS_AS(parse_rational(""), InvalidArgument);
}

TEST_CASE("integer helpers") {
    CHECK(mod_nonneg(-7, 5) == 3);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(gcd(12, -18) == 6);
    CHECK(lcm(4, 6) == 12);
    Integer s, t;
    const Integer g = gcdext(240, 46, s, t);
    CHECK(g == 2);
    CHECK(s * 240 + t * 46 == 2);
    CHECK(valuation(72, 2) == 3);
    CHECK(valuation(72, 3) == 2);
    CHECK(valuation(5, 3) == 0);
    CHECK(pow(3, 4) == 81);
    CHECK(is_probable_prime(7));
    CHECK_FALSE(is_probable_prime(9));
    CHECK(inverse_mod(3, 7) == 5);
    CHECK_THROWS_AS(inverse_mod(3, 9), InvalidArgument);
    CHECK(reduce_mod(make_rational(1, 2), 9) == 5);
    CHECK(reduce_mod(make_rational(-1, 2), 9) == 4);
    CHECK_THROWS_AS(reduce_mod(make_rational(1, 3), 9), InvalidArgument);
}

TEST_CASE("residues") {
    const ResidueInt a(7, 9), b(5, 9);
    CHECK((a + b).value() == 3);
    CHECK((a - b).value() == 2);
    CHECK((a * b).value() == 8);
    CHECK((-a).value() == 2);
    CHECK(a.is_unit());
    CHECK((a * a.inverse()).value() == 1);
    CHECK_FALSE(ResidueInt(3, 9).is_unit());
    CHECK_THROWS_AS(ResidueInt(3, 9).inverse(), InvalidArgument);
    CHECK_THROWS_AS(a + ResidueInt(1, 3), ModulusMismatch);
    CHECK_THROWS_AS(ResidueInt(1, 1), InvalidArgument);
    CHECK(ResidueInt(-1, 5).value() == 4);
}
