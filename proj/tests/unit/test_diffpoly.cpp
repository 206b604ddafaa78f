#include <doctest.h>

#include "supertau/diffpoly.hpp"

using namespace supertau;

namespace {
DiffPoly u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }
DiffPoly th(int s) { return DiffPoly::gen(Gen::theta(1, s)); }
}  // namespace

TEST_CASE("rational arithmetic promotes and demotes") {
    Rational big(INT64_MAX);
    Rational sq = big * big;
    CHECK(sq / big == big);
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK(Rational::parse("-6/4") == Rational(-3, 2));
    CHECK(Rational(2, -4).to_string() == "-1/2");
}

TEST_CASE("odd generators anticommute") {
    CHECK((th(0) * th(0)).is_zero());
    CHECK(th(0) * th(1) == -(th(1) * th(0)));
    CHECK((th(0) * th(1)).terms()[0].coeff == Rational(1));
}

TEST_CASE("even product") {
    DiffPoly a = u() + DiffPoly::eps(2) * u().pow(2);
    CHECK(a * u() == u().pow(2) + DiffPoly::eps(2) * u().pow(3));
}

TEST_CASE("left partial derivatives") {
    CHECK(partial(u().pow(2), Gen::jet(1, 0)) == 2 * u());
    CHECK(partial(th(0) * th(1), Gen::theta(1, 1)) == -th(0));
    CHECK(partial(u() * th(0) * th(1), Gen::theta(1, 0)) == u() * th(1));
}

TEST_CASE("exponentials multiply by adding multiples") {
    DiffPoly e = DiffPoly::gen(Gen::expo(1));
    DiffPoly einv = DiffPoly::gen(Gen::expo(1), -1);
    CHECK(e * einv == DiffPoly(1));
    CHECK(partial_field(u() * e.pow(2), 1) == e.pow(2) + 2 * u() * e.pow(2));
}
