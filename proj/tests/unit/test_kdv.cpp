#include <doctest.h>

#include "oracles/jet_oracle.hpp"
#include "supertau/frobenius.hpp"
#include "supertau/kdv.hpp"

using namespace supertau;

namespace {

DiffPoly u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }
DiffPoly sg(int k, int s = 0) { return DiffPoly::gen(Gen::sigma(1, k, s)); }
const DiffPoly eps2 = DiffPoly::eps(2);

void require_all(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs) {
        INFO(r.id << " " << r.note << " residue " << r.residue.to_string());
        CHECK(r.pass);
    }
}

const KdvCover& kdv() {
    static KdvCover c;
    return c;
}

}  // namespace

TEST_CASE("Gelfand-Dickey polynomials") {
    const auto& k = kdv();
    CHECK(k.R(0) == DiffPoly(1));
    CHECK(k.R(1) == u());
    CHECK(k.R(2) == Rational(1, 2) * u().pow(2) + Rational(1, 12) * eps2 * u(2));
    DiffPoly r3 = Rational(1, 6) * u().pow(3) + eps2 * (Rational(1, 12) * u() * u(2) + Rational(1, 24) * u(1).pow(2)) +
                  Rational(1, 240) * DiffPoly::eps(4) * u(4);
    CHECK(k.R(3) == r3);
    auto brute = oracle::brute_force_R(5);
    REQUIRE(brute.size() == 6);
    for (int n = 0; n <= 5; ++n) CHECK(k.R(n) == oracle::to_diffpoly(brute[n]));
    require_all(k.check_recursion(6));
}

TEST_CASE("first flows") {
    const auto& k = kdv();
    CHECK(k.t_flow(1, 1).apply(u()) == u() * u(1) + Rational(1, 12) * eps2 * u(3));
    CHECK(k.t_flow(1, 0).apply(sg(2)) == k.algebra()->nf_sigma(1, 2, 1));
    CHECK(k.tau_flow(2).apply(sg(2)).is_zero());
    CHECK(k.tau_flow(1).apply(u()) == u() * sg(0, 1) + Rational(1, 2) * u(1) * sg(0) + Rational(1, 8) * eps2 * sg(0, 3));
    CHECK(k.omega(1, 0, 1, 0) == u());
    require_all(check_principal_unit(k, 3));
}

TEST_CASE("generating series identities") {
    require_all(kdv().check_generating_identities(4));
}

TEST_CASE("zero curvature") {
    require_all(kdv().check_zero_curvature(2, 3, 4));
}

TEST_CASE("two-point functions and odd densities") {
    require_all(kdv().check_omega_phi(3, 3));
}

TEST_CASE("dispersionless limit") {
    auto spec = std::make_shared<FrobeniusSpec>(load_spec(builtin_spec_json("onedim")));
    FrobeniusCover onedim(spec);
    require_all(kdv().check_dispersionless(onedim, 3, 3));
    require_all(kdv().check_bihamiltonian_recovery(3));
    // Closed form of d f_k / d tau_n at eps = 0.
    for (int kk = 0; kk <= 3; ++kk)
        for (int n = 0; n <= 2; ++n) {
            DiffPoly expect = half_gamma_ratio(0, kk) * sg(n + kk);
            Rational fact(1);
            for (int m = 0; m < kk; ++m) {
                fact *= Rational(m + 1);
                expect -= Rational(1, 2) * half_gamma_ratio(m, kk) / fact * u().pow(m + 1) * sg(n + kk - m - 1);
            }
            CHECK(kdv().phi(1, kk, n).eps_to_zero() == expect);
            CHECK(onedim.phi(1, kk, n) == expect);
        }
}

TEST_CASE("flows commute") {
    require_all(check_commutativity(kdv(), 2, 2));
}
