#include <doctest.h>

#include "supertau/errors.hpp"
#include "supertau/frobenius.hpp"

using namespace supertau;

namespace {

std::shared_ptr<FrobeniusCover> make_cover(const std::string& name, bool with_table = true) {
    auto doc = builtin_spec_json(name);
    if (!with_table) doc.erase("h_table");
    return std::make_shared<FrobeniusCover>(std::make_shared<FrobeniusSpec>(load_spec(doc)));
}

DiffPoly v() { return field(1); }
DiffPoly u() { return field(2); }
DiffPoly eu() { return DiffPoly::gen(Gen::expo(2)); }

Rational factorial(int k) {
    Rational r(1);
    for (int i = 2; i <= k; ++i) r *= Rational(i);
    return r;
}

void require_all(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs) {
        INFO(r.id << " residue " << r.residue.to_string());
        CHECK(r.pass);
    }
}

}  // namespace

TEST_CASE("one-dimensional hamiltonian densities and two-point functions") {
    auto c = make_cover("onedim");
    for (int p = 0; p <= 6; ++p) CHECK(c->h(1, p) == DiffPoly::gen(Gen::jet(1, 0), p + 1) * (Rational(1) / factorial(p + 1)));
    for (int k = 0; k <= 4; ++k)
        for (int n = 0; n <= 4; ++n) {
            Rational w = Rational(1) / (Rational(k + n + 1) * factorial(k) * factorial(n));
            CHECK(c->omega(1, k, 1, n) == DiffPoly::gen(Gen::jet(1, 0), k + n + 1) * w);
        }
    CHECK(c->resonant().empty());
    CHECK(c->gauge().empty());
}

TEST_CASE("cp1 densities match the closed forms") {
    auto c = make_cover("cp1", false);
    CHECK(c->h(1, 0) == u());
    CHECK(c->h(2, 0) == v());
    CHECK(c->h(1, 1) == u() * v());
    CHECK(c->h(2, 1) == Rational(1, 2) * v().pow(2) + eu());
    CHECK(c->h(1, 2) == Rational(1, 2) * v().pow(2) * u() + u() * eu() - 2 * eu());
    CHECK(c->h(2, 2) == Rational(1, 6) * v().pow(3) + v() * eu());
    require_all(c->check_h(4));
    require_all(make_cover("cp1")->check_h(2));
}

TEST_CASE("integration of exponential polynomials") {
    DiffPoly f = u().pow(2) * DiffPoly::gen(Gen::expo(2), -3) + v() * u();
    DiffPoly g = integrate_field(f, 2);
    CHECK(partial_field(g, 2) == f);
    VectorField w{DiffPoly(), u() * eu(), v() * eu()};
    CHECK_THROWS_AS(potential_of(w, 2), SolveError);
}

TEST_CASE("resonance and the derivative of the resonant density") {
    auto c = make_cover("cp1");
    auto res = c->resonant();
    REQUIRE(res.size() == 1);
    CHECK(res[0] == std::make_pair(1, 1));
    const Algebra& alg = *c->algebra();
    for (int n = 0; n <= 2; ++n) {
        CHECK(c->phi(1, 1, n) == DiffPoly::gen(Gen::phi(1, 1, n)));
        DiffPoly expect = v() * alg.nf_sigma(1, n, 1) + u() * alg.nf_sigma(2, n, 1);
        CHECK(alg.dx(DiffPoly::gen(Gen::phi(1, 1, n))) == expect);
    }
}

TEST_CASE("two-point functions, densities and tau symmetry") {
    for (const char* name : {"onedim", "cp1"}) {
        auto c = make_cover(name);
        require_all(c->check_omega(3));
        require_all(c->check_phi(3, 3));
        require_all(c->check_delta(2, 2));
        require_all(c->check_tau_symmetry(4));
        require_all(c->check_principal_unit(2));
    }
}

TEST_CASE("flows commute") {
    require_all(check_commutativity(*make_cover("onedim"), 3, 3));
    require_all(check_commutativity(*make_cover("cp1"), 2, 2));
}

TEST_CASE("spec validation") {
    for (const auto& name : builtin_spec_names()) {
        auto s = load_spec(builtin_spec_json(name));
        auto back = spec_to_json(s);
        CHECK(spec_to_json(load_spec(back)) == back);
        CHECK(load_spec(back).h_table == s.h_table);
        require_all(validate_spec(s));
    }
    // F = v1^2 v3 / 2 + v1 v2^2 / 2 + v2^2 v3^2 violates associativity.
    nlohmann::json bad = {
        {"name", "bad"}, {"n", 3}, {"d", "0"},
        {"potential", {{"1/2", {2, 0, 1}, {0, 0, 0}}, {"1/2", {1, 2, 0}, {0, 0, 0}}, {"1", {0, 2, 2}, {0, 0, 0}}}},
        {"euler", {{"linear", {"1", "1", "1"}}, {"constants", {"0", "0", "0"}}}},
        {"mu", {"0", "0", "0"}}};
    try {
        load_spec(bad);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).rfind("wdvv", 0) == 0);
    }
    nlohmann::json degenerate = builtin_spec_json("onedim");
    degenerate["potential"] = {{"1", {4}, {0}}};
    CHECK_THROWS_AS(load_spec(degenerate), ValidationError);
}
