#include <doctest.h>

#include "supertau/algebra.hpp"

using namespace supertau;

namespace {
DiffPoly u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }
DiffPoly sg(int k, int s = 0) { return DiffPoly::gen(Gen::sigma(1, k, s)); }

std::shared_ptr<Algebra> kdv_like() {
    auto a = std::make_shared<Algebra>(1);
    a->set_sigma_rule([](const Algebra& alg, int, int k) {
        return u() * alg.nf_sigma(1, k - 1, 1) + Rational(1, 2) * u(1) * sg(k - 1) +
               Rational(1, 8) * DiffPoly::eps(2) * alg.nf_sigma(1, k - 1, 3);
    });
    return a;
}
}  // namespace

TEST_CASE("dx on jets and sigma rule") {
    auto a = kdv_like();
    CHECK(a->dx(u()) == u(1));
    DiffPoly expect = u() * sg(0, 1) + Rational(1, 2) * u(1) * sg(0) + Rational(1, 8) * DiffPoly::eps(2) * sg(0, 3);
    CHECK(a->dx(sg(1)) == expect);
    CHECK(a->nf_sigma(1, 1, 2) == a->dx(expect));
}

TEST_CASE("dx on exponentials and times") {
    Algebra a(1);
    DiffPoly e = DiffPoly::gen(Gen::expo(1), 3);
    CHECK(a.dx(e) == 3 * u(1) * e);
    CHECK(a.dx(DiffPoly::gen(Gen::time(1, 2))).is_zero());
    CHECK(a.dx_full(DiffPoly::gen(Gen::time(1, 0))) == DiffPoly(1));
}

TEST_CASE("odd derivation signs") {
    auto a = std::make_shared<Algebra>(1);
    // D theta = 1 is an odd derivation (interior product)
    Derivation d(a, 1, [](Gen g) { return g == Gen::theta(1, 0) ? DiffPoly(1) : DiffPoly(); });
    DiffPoly th0 = sg(0), th1 = sg(0, 1);
    CHECK(d.apply(th0 * th1).is_zero() == false);
    CHECK(d.apply(th1 * th0) == -th1);
    CHECK(d.apply(th0 * th1) == th1);
}
