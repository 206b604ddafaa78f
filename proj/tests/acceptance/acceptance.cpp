// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "oracles/jet_oracle.hpp"
#include "properties.hpp"
#include "supertau/frobenius.hpp"
#include "supertau/kdv.hpp"
#include "supertau/virasoro.hpp"

using namespace supertau;

namespace {

using Checks = std::vector<CheckResult>;

struct Criterion {
    int number;
    std::string name;
    double budget_seconds;
    std::function<Checks()> run;
};

std::shared_ptr<FrobeniusCover> builtin(const std::string& name) {
    return std::make_shared<FrobeniusCover>(std::make_shared<FrobeniusSpec>(load_spec(builtin_spec_json(name))));
}

const KdvCover& kdv() {
    static KdvCover c;
    return c;
}

void append(Checks& out, const std::string& prefix, Checks rs) {
    for (auto& r : rs) {
        r.id = prefix + r.id;
        out.push_back(std::move(r));
    }
}

CheckResult expect(std::string id, bool ok, std::string note = {}) {
    return CheckResult{std::move(id), ok, DiffPoly(), std::move(note)};
}

CheckResult equal(std::string id, const DiffPoly& got, const DiffPoly& want) {
    return check_zero(std::move(id), got - want);
}

// Every expected id occurs among rs as a prefix match of some id.
CheckResult covers(const std::string& id, const Checks& rs, const std::vector<std::string>& prefixes) {
    std::string missing;
    for (const auto& p : prefixes) {
        bool found = false;
        for (const auto& r : rs) found = found || r.id.rfind(p, 0) == 0;
        if (!found) missing += " " + p;
    }
    return expect(id, missing.empty(), missing.empty() ? "" : "missing:" + missing);
}

DiffPoly u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }

Checks poisson_pair() { return check_kdv_poisson_pair(); }

Checks gelfand_dickey() {
    Checks out;
    DiffPoly eps2 = DiffPoly::eps(2);
    out.push_back(equal("R1", kdv().R(1), u()));
    out.push_back(equal("R2", kdv().R(2), Rational(1, 2) * u().pow(2) + Rational(1, 12) * eps2 * u(2)));
    auto brute = oracle::brute_force_R(3);
    out.push_back(expect("brute-force-solvable", brute.size() == 4));
    if (brute.size() == 4) out.push_back(equal("R3-brute-force", kdv().R(3), oracle::to_diffpoly(brute[3])));
    return out;
}

Checks commutativity() {
    Checks out;
    auto onedim = builtin("onedim"), cp1 = builtin("cp1");
    out.push_back(expect("cp1-has-resonant-phi", !cp1->resonant().empty()));
    append(out, "onedim:", check_commutativity(*onedim, 3, 3));
    append(out, "cp1:", check_commutativity(*cp1, 3, 3));
    append(out, "kdv:", check_commutativity(kdv(), 3, 3));
    return out;
}

Checks generating_identities() {
    Checks out = kdv().check_generating_identities(6);
    out.push_back(covers("coverage", out,
                         {"c-equation", "tau0-on-c", "tau-on-theta", "tau-on-c[", "tau-on-c-bivariate", "b-equation",
                          "bc-derivative"}));
    return out;
}

Checks zero_curvature() {
    Checks out = kdv().check_zero_curvature(3, 3, 6);
    std::vector<std::string> ids;
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m) ids.push_back("zero-curvature[" + std::to_string(n) + "," + std::to_string(m) + "]");
    ids.push_back("residue[");
    out.push_back(covers("coverage", out, ids));
    return out;
}

Checks cp1_tables() {
    Checks out;
    // The printed table is withheld so the densities come from the recursion.
    auto doc = builtin_spec_json("cp1");
    doc.erase("h_table");
    FrobeniusCover c(std::make_shared<FrobeniusSpec>(load_spec(doc)));
    DiffPoly v = field(1), uu = field(2), eu = DiffPoly::gen(Gen::expo(2));
    out.push_back(equal("h[1,0]", c.h(1, 0), uu));
    out.push_back(equal("h[2,0]", c.h(2, 0), v));
    out.push_back(equal("h[1,1]", c.h(1, 1), uu * v));
    out.push_back(equal("h[2,1]", c.h(2, 1), Rational(1, 2) * v.pow(2) + eu));
    out.push_back(equal("h[1,2]", c.h(1, 2), Rational(1, 2) * v.pow(2) * uu + uu * eu - 2 * eu));
    out.push_back(equal("h[2,2]", c.h(2, 2), Rational(1, 6) * v.pow(3) + v * eu));

    auto detected = detect_resonance(c.spec(), 16);
    auto res = c.resonant();
    std::vector<std::pair<int, int>> want{{1, 1}};
    out.push_back(expect("resonance-detected", detected == want));
    out.push_back(expect("resonance-cover", res == want));

    const Algebra& alg = *c.algebra();
    for (int n = 0; n <= 3; ++n) {
        DiffPoly phi = DiffPoly::gen(Gen::phi(1, 1, n));
        DiffPoly rhs = v * alg.nf_sigma(1, n, 1) + uu * alg.nf_sigma(2, n, 1);
        out.push_back(equal("phi-derivative[" + std::to_string(n) + "]", c.reduce(alg.dx(phi)), c.reduce(rhs)));
    }
    return out;
}

Checks tau_symmetry() {
    Checks out;
    append(out, "onedim:", builtin("onedim")->check_tau_symmetry(4));
    append(out, "cp1:", builtin("cp1")->check_tau_symmetry(4));
    return out;
}

Checks virasoro_algebra() {
    Checks out;
    for (const char* name : {"onedim", "cp1"}) {
        auto c = builtin(name);
        auto table = [c](int m) { return general_coefficients(*c, m); };
        append(out, std::string(name) + ":", check_virasoro_algebra(table, {-1, 0, 1}, c->n(), 4, 4));
    }
    auto table = [](int m) { return kdv_coefficients(m, true); };
    append(out, "kdv:", check_virasoro_algebra(table, {-1, 0, 1, 2}, 1, 4, 4));
    return out;
}

Checks symmetries(const TauCover& cover, const std::function<VirasoroCoefficients(int)>& table,
                  const std::vector<int>& ms, int P, int K, DiffPoly genus, SymmetryBounds b) {
    std::set<int> needed(ms.begin(), ms.end());
    for (size_t i = 0; i < ms.size(); ++i)
        for (size_t j = i + 1; j < ms.size(); ++j) needed.insert(ms[i] + ms[j]);
    std::map<int, std::unique_ptr<VirasoroFlow>> own;
    std::map<int, const VirasoroFlow*> flows;
    for (int m : needed) {
        own[m] = std::make_unique<VirasoroFlow>(cover, table(m), P, K, genus);
        flows[m] = own[m].get();
    }
    return check_symmetry_commutation(cover, flows, ms, b);
}

Checks virasoro_symmetry() {
    Checks out;
    for (const char* name : {"onedim", "cp1"}) {
        auto c = builtin(name);
        auto table = [c](int m) { return general_coefficients(*c, m); };
        append(out, std::string(name) + ":", symmetries(*c, table, {-1, 0, 1}, 4, 4, DiffPoly(), {3, 3}));
        for (int m : {-1, 0, 1})
            append(out, std::string(name) + ":a-equals-b[" + std::to_string(m) + "]:",
                   check_ab_identity(*c, general_coefficients(*c, m)));
    }
    auto table = [](int m) { return kdv_coefficients(m, false); };
    append(out, "kdv:", symmetries(kdv(), table, {-1, 0, 1, 2}, 4, 4, DiffPoly::eps(2), {2, 2}));
    return out;
}

Checks dispersionless() {
    Checks out;
    auto onedim = builtin("onedim");
    append(out, "limit:", kdv().check_dispersionless(*onedim, 3, 3));
    append(out, "bihamiltonian:", kdv().check_bihamiltonian_recovery(3));
    return out;
}

Checks properties() {
    Checks out;
    for (const auto& o : {property::leibniz(1000, 1), property::antiderivative_of_dx(1000, 2),
                          property::lift_independence(1000, 3), property::confluence(1000, 4)})
        out.push_back(expect(o.name + "[" + std::to_string(o.cases) + "]", o.pass() && o.cases >= 1000,
                             o.first_failure));
    return out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "KdV Poisson pair", 5, poisson_pair},
        {2, "Gelfand-Dickey R1, R2 exact and R3 by brute force", 1, gelfand_dickey},
        {3, "flow commutativity on onedim, cp1 and KdV", 120, commutativity},
        {4, "generating identities", 60, generating_identities},
        {5, "zero curvature and residues", 60, zero_curvature},
        {6, "cp1 densities, resonance and the resonant density", 10, cp1_tables},
        {7, "tau symmetry", 30, tau_symmetry},
        {8, "Virasoro algebra", 60, virasoro_algebra},
        {9, "Virasoro symmetries and A = B", 300, virasoro_symmetry},
        {10, "dispersionless limit and bihamiltonian recovery", 30, dispersionless},
        {11, "property suites", 120, properties},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Checks rs;
        std::string error;
        try {
            rs = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        int bad = 0;
        for (const auto& r : rs) bad += !r.pass;
        bool ok = error.empty() && !rs.empty() && bad == 0 && secs <= c.budget_seconds;
        failed += !ok;
        std::printf("%s criterion %2d: %s (%zu checks, %.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", c.number,
                    c.name.c_str(), rs.size(), secs, c.budget_seconds);
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        int shown = 0;
        for (const auto& r : rs)
            if (!r.pass && shown++ < 5)
                std::printf("    failed %s %s\n", r.id.c_str(), r.note.empty() ? r.residue.to_string().c_str() : r.note.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
