#include <doctest.h>

#include "supertau/serialize.hpp"

using namespace supertau;

namespace {
DiffPoly u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }
}  // namespace

TEST_CASE("latex for the second Gelfand-Dickey density") {
    DiffPoly r2 = Rational(1, 2) * u().pow(2) + Rational(1, 12) * DiffPoly::eps(2) * u(2);
    std::string s = to_latex(r2, LatexStyle::kdv());
    CHECK(s.find("\\frac{u^2}{2}") != std::string::npos);
    CHECK(s == "\\frac{u^2}{2} + \\frac{\\varepsilon^2 u''}{12}");
}

TEST_CASE("latex signs and odd generators") {
    DiffPoly p = -3 * u() * DiffPoly::gen(Gen::sigma(1, 2)) - Rational(1, 2) * DiffPoly::gen(Gen::theta(1, 1));
    CHECK(to_latex(p, LatexStyle::kdv()) == "-\\frac{\\theta'}{2} - 3 u \\sigma_{2}");
    CHECK(to_latex(DiffPoly()) == "0");
}

TEST_CASE("json round trip") {
    DiffPoly p = Rational(7, 3) * u(2) * DiffPoly::gen(Gen::theta(1, 0)) * DiffPoly::gen(Gen::otime(2)) +
                 DiffPoly::gen(Gen::expo(2), -2) * DiffPoly::gen(Gen::phi(1, 1, 3)) * DiffPoly::eps(-2) +
                 DiffPoly::c0(2) * DiffPoly::gen(Gen::onepoint(2, 4)) * DiffPoly::gen(Gen::time(1, 3));
    auto j = to_json(p);
    CHECK(from_json(j) == p);
    CHECK(to_json(from_json(j)).dump() == j.dump());
    CHECK(parse_gen_name("sigma2_3_1") == Gen::sigma(2, 3, 1));
}
