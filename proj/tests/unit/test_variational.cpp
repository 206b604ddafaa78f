#include <doctest.h>

#include "supertau/antiderivative.hpp"
#include "supertau/variational.hpp"

using namespace supertau;

namespace {
DiffPoly u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }
DiffPoly th(int s = 0) { return DiffPoly::gen(Gen::theta(1, s)); }
const DiffPoly eps2 = DiffPoly::eps(2);

// Independent Euler operator: expand sum_s (-1)^s dx^s(d f / d u^{(s)}) term by term.
DiffPoly euler_oracle(const DiffPoly& f, bool odd, int smax = 8) {
    DiffPoly out;
    for (int s = 0; s <= smax; ++s) {
        DiffPoly d = odd ? partial(f, Gen::theta(1, s)) : (s == 0 ? partial_field(f, 1) : partial(f, Gen::jet(1, s)));
        for (int i = 0; i < s; ++i) d = dx_free(d);
        out += (s % 2 ? -1 : 1) * d;
    }
    return out;
}

LocalFunctional kdv_p0() { return LocalFunctional(1, Rational(1, 2) * th() * th(1), 2); }
LocalFunctional kdv_p1() { return LocalFunctional(1, Rational(1, 2) * (u() * th() * th(1) + Rational(1, 8) * eps2 * th() * th(3)), 2); }
}  // namespace

TEST_CASE("variational derivatives against the brute-force Euler operator") {
    DiffPoly printed = Rational(1, 2) * u().pow(2) + Rational(1, 12) * eps2 * u(2);
    CHECK(variational_derivative(printed, Family::Even, 1) == u());
    DiffPoly h0 = Rational(1, 2) * u().pow(2) + Rational(1, 12) * eps2 * u() * u(2);
    CHECK(variational_derivative(h0, Family::Even, 1) == u() + Rational(1, 6) * eps2 * u(2));
    CHECK(variational_derivative(h0, Family::Even, 1) == euler_oracle(h0, false));
    CHECK(variational_derivative(Rational(1, 2) * th() * th(1), Family::Odd, 1) == th(1));
    CHECK(variational_derivative(dx_free(u().pow(3)), Family::Even, 1).is_zero());
    DiffPoly mixed = u(1) * u(3) * th() * th(2) + DiffPoly::gen(Gen::expo(1), 2) * u(1).pow(2);
    CHECK(variational_derivative(mixed, Family::Even, 1) == euler_oracle(mixed, false));
    CHECK(variational_derivative(mixed, Family::Odd, 1) == euler_oracle(mixed, true));
}

TEST_CASE("total derivative membership") {
    auto a = is_total_derivative(u() * u(1), 1);
    CHECK(a.exact);
    CHECK(a.witness == Rational(1, 2) * u().pow(2));
    CHECK_FALSE(is_total_derivative(u(), 1).exact);
    auto b = is_total_derivative(th() * th(2), 1);
    CHECK(b.exact);
    CHECK(b.witness == th() * th(1));
}

TEST_CASE("KdV variational derivatives of P1") {
    LocalFunctional p1 = kdv_p1();
    CHECK(variational_derivative(p1, Family::Odd, 1) == u() * th(1) + Rational(1, 2) * u(1) * th() + Rational(1, 8) * eps2 * th(3));
    CHECK(variational_derivative(p1, Family::Even, 1) == Rational(1, 2) * th() * th(1));
}

TEST_CASE("KdV bihamiltonian pair") {
    for (const auto& c : check_poisson_pair(kdv_p0(), kdv_p1())) CHECK_MESSAGE(c.pass, c.name);
    LocalFunctional hyd1(1, Rational(1, 2) * u() * th() * th(1), 2);
    for (const auto& c : check_poisson_pair(kdv_p0(), hyd1)) CHECK_MESSAGE(c.pass, c.name);
    // a non-Poisson bivector
    LocalFunctional bad(1, u().pow(2) * th() * th(3), 2);
    auto r = check_poisson_pair(kdv_p0(), bad);
    CHECK(r[0].pass);
    CHECK_FALSE(r[2].pass);
}

TEST_CASE("flat exactness in one dimension") {
    LocalFunctional x1(1, th(), 1);
    LocalFunctional hyd1(1, Rational(1, 2) * u() * th() * th(1), 2);
    CHECK(functional_equal(schouten_bracket(x1, hyd1), kdv_p0()));
}

TEST_CASE("D_P flows") {
    Derivation d0 = dp_flow(kdv_p0());
    CHECK(d0.parity() == 1);
    CHECK(d0.apply(u()) == th(1));
    CHECK(d0.apply(th()).is_zero());
    Derivation d1 = dp_flow(LocalFunctional(1, Rational(1, 2) * u() * th() * th(1), 2));
    CHECK(d1.apply(th()) == Rational(1, 2) * th() * th(1));
}

TEST_CASE("operators applied to vectors") {
    DiffOperator p0(1), p1(1);
    p0.add(1, 1, 1, DiffPoly(1));
    p1.add(1, 1, 1, u());
    p1.add(1, 1, 0, Rational(1, 2) * u(1));
    p1.add(1, 1, 3, Rational(1, 8) * eps2);
    CHECK(apply_operator(p0, {u()})[0] == u(1));
    CHECK(apply_operator(p1, {DiffPoly(1)})[0] == Rational(1, 2) * u(1));
    CHECK(apply_operator(p1, {u()})[0] == Rational(3, 2) * u() * u(1) + Rational(1, 8) * eps2 * u(3));
    CHECK_THROWS_AS(apply_operator(p1, {u(), u()}), DimensionMismatch);
}

TEST_CASE("degree guard") {
    CHECK_THROWS_AS(LocalFunctional::of(1, th() * th(1) + u() * th()), ValidationError);
    CHECK_THROWS_AS(check_poisson_pair(kdv_p0(), LocalFunctional(1, u() * th() * th(1) * th(2), 3)), ValidationError);
}
