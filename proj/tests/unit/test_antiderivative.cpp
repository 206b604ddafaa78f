#include <doctest.h>

#include "supertau/antiderivative.hpp"

using namespace supertau;

namespace {
DiffPoly u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }
DiffPoly v2(int s = 0) { return DiffPoly::gen(Gen::jet(2, s)); }
DiffPoly th(int s) { return DiffPoly::gen(Gen::theta(1, s)); }
DiffPoly e(int q) { return DiffPoly::gen(Gen::expo(1), q); }
const DiffPoly eps2 = DiffPoly::eps(2);
}  // namespace

TEST_CASE("antiderivative of simple total derivatives") {
    CHECK(antiderivative(u() * u(1)) == Rational(1, 2) * u().pow(2));
    DiffPoly p1r1 = u() * u(1) + Rational(1, 2) * u(1) * u() + Rational(1, 8) * eps2 * u(3);
    DiffPoly r2 = antiderivative(p1r1 * Rational(2, 3));
    CHECK(r2 == Rational(1, 2) * u().pow(2) + Rational(1, 12) * eps2 * u(2));
}

TEST_CASE("antiderivative rejects non-exact input") {
    CHECK_THROWS_AS(antiderivative(u()), NotATotalDerivative);
    CHECK_THROWS_AS(antiderivative(u(1) * u(1)), NotATotalDerivative);
    CHECK_THROWS_AS(antiderivative(th(0) * th(1)), NotATotalDerivative);
    CHECK_THROWS_AS(antiderivative(DiffPoly(3)), NotATotalDerivative);
    CHECK_THROWS_AS(antiderivative(DiffPoly::gen(Gen::sigma(1, 1))), UnsupportedGenerators);
}

TEST_CASE("antiderivative in odd and mixed variables") {
    CHECK(antiderivative(th(0) * th(2)) == th(0) * th(1));
    CHECK(antiderivative(u(1) * th(0) + u() * th(1)) == u() * th(0));
    DiffPoly q = u() * v2(1) * th(2) + u(3) * v2() * v2(2);
    CHECK(antiderivative(dx_free(q)) == q);
}

TEST_CASE("antiderivative with exponentials") {
    CHECK(antiderivative(u(1) * e(1)) == e(1));
    CHECK(antiderivative(u() * u(1) * e(2)) == e(2) * (Rational(1, 2) * u() - Rational(1, 4)));
    DiffPoly q = u().pow(3) * e(-1) + u(1) * e(1) * th(0);
    CHECK(antiderivative(dx_free(q)) == q);
}
