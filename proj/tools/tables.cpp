#include "tables.hpp"

#include <sstream>
#include <stdexcept>

#include "supertau/errors.hpp"
#include "supertau/frobenius.hpp"
#include "supertau/kdv.hpp"
#include "supertau/virasoro.hpp"

namespace supertau::cli {

namespace {

std::string ij(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

std::string dlatex(Gen g, const std::string& by, const LatexStyle& st) {
    return "\\frac{\\partial " + to_latex(g, st) + "}{\\partial " + by + "}";
}

std::vector<Gen> flow_generators(const TauCover& c, const SuiteOptions& o) {
    std::vector<Gen> gens;
    for (int a = 1; a <= c.n(); ++a) gens.push_back(Gen::jet(a, 0));
    for (int k = 0; k <= o.kmax; ++k)
        for (int a = 1; a <= c.n(); ++a) gens.push_back(Gen::sigma(a, k));
    for (int p = 0; p <= o.pmax; ++p)
        for (int a = 1; a <= c.n(); ++a) gens.push_back(Gen::onepoint(a, p));
    for (auto [a, p] : c.resonant())
        if (p <= o.pmax)
            for (int k = 0; k <= o.kmax; ++k) gens.push_back(Gen::phi(a, p, k));
    return gens;
}

void add_h(Table& t, const TauCover& c, const SuiteOptions& o) {
    for (int p = 0; p <= o.pmax; ++p)
        for (int a = 1; a <= c.n(); ++a)
            t.entries.push_back({"h[" + ij(a, p) + "]", "h_{" + ij(a, p) + "}", c.h(a, p)});
}

void add_omega(Table& t, const TauCover& c, const SuiteOptions& o) {
    for (int p = 0; p <= o.pmax; ++p)
        for (int a = 1; a <= c.n(); ++a)
            for (int q = 0; q <= o.pmax; ++q)
                for (int b = 1; b <= c.n(); ++b)
                    t.entries.push_back({"omega[" + ij(a, p) + ";" + ij(b, q) + "]",
                                         "\\Omega_{" + ij(a, p) + ";" + ij(b, q) + "}", c.omega(a, p, b, q)});
}

void add_phi(Table& t, const TauCover& c, const SuiteOptions& o) {
    for (int p = 0; p <= o.pmax; ++p)
        for (int a = 1; a <= c.n(); ++a)
            for (int n = 0; n <= o.nmax; ++n)
                t.entries.push_back({"phi[" + ij(a, p) + ";" + std::to_string(n) + "]",
                                     "\\Phi^{" + std::to_string(n) + "}_{" + ij(a, p) + "}", c.phi(a, p, n)});
}

void add_flows(Table& t, const TauCover& c, const SuiteOptions& o) {
    const auto gens = flow_generators(c, o);
    for (int q = 0; q <= o.pmax; ++q)
        for (int b = 1; b <= c.n(); ++b) {
            const Derivation& d = c.t_flow(b, q);
            std::string by = "t^{" + ij(b, q) + "}";
            for (Gen g : gens)
                t.entries.push_back({"d" + gen_name(g) + "/dt" + ij(b, q), dlatex(g, by, t.style),
                                     d.apply(DiffPoly::gen(g))});
        }
    for (int k = 0; k <= o.kmax; ++k) {
        const Derivation& d = c.tau_flow(k);
        std::string by = "\\tau_{" + std::to_string(k) + "}";
        for (Gen g : gens)
            t.entries.push_back(
                {"d" + gen_name(g) + "/dtau" + std::to_string(k), dlatex(g, by, t.style), d.apply(DiffPoly::gen(g))});
    }
}

std::string tidx(TimeIndex x) { return "(" + ij(x.first, x.second) + ")"; }

void add_virasoro(Table& t, const SuiteTarget& on, const SuiteOptions& o) {
    for (int m : o.ms) {
        VirasoroCoefficients v = on.frobenius ? general_coefficients(*on.frobenius, m, o.odd_weight)
                                              : kdv_coefficients(m, true, o.odd_weight);
        std::string lm = "L" + std::to_string(m);
        std::string sub = "_{" + std::to_string(m) + "}";
        for (const auto& [xy, val] : v.a)
            t.entries.push_back({lm + ".a[" + tidx(xy.first) + tidx(xy.second) + "]",
                                 "a" + sub + "^{" + tidx(xy.first) + tidx(xy.second) + "}", val * DiffPoly::eps(v.a_eps)});
        for (int p = 0; p <= o.P; ++p)
            for (int al = 1; al <= v.n; ++al)
                for (const auto& [y, val] : v.b_row({al, p}))
                    if (y.second <= o.P)
                        t.entries.push_back({lm + ".b[" + tidx({al, p}) + "->" + tidx(y) + "]",
                                             "b" + sub + "{}^{" + tidx(y) + "}_{" + tidx({al, p}) + "}", DiffPoly(val)});
        for (const auto& [xy, val] : v.c)
            t.entries.push_back({lm + ".c[" + tidx(xy.first) + tidx(xy.second) + "]",
                                 "c" + sub + "{}_{" + tidx(xy.first) + tidx(xy.second) + "}",
                                 val * DiffPoly::eps(v.c_eps)});
        t.entries.push_back({lm + ".constant", "\\kappa" + sub, DiffPoly(v.constant)});
        for (int k = 0; k <= o.K; ++k) {
            DiffPoly w = v.odd_weight(k);
            if (o.c0) w = w.substitute_c0(*o.c0);
            t.entries.push_back(
                {lm + ".w[" + std::to_string(k) + "]", "w" + sub + "(" + std::to_string(k) + ")", std::move(w)});
        }
    }
}

void add_spec(Table& t, const FrobeniusSpec& s) {
    t.entries.push_back({"F", "F", s.potential});
    for (int a = 1; a <= s.n; ++a) t.entries.push_back({"E[" + std::to_string(a) + "]", "E^{" + std::to_string(a) + "}", s.euler[a]});
    for (int a = 1; a <= s.n; ++a)
        t.entries.push_back({"mu[" + std::to_string(a) + "]", "\\mu_{" + std::to_string(a) + "}", DiffPoly(s.mu[a])});
    for (int a = 1; a <= s.n; ++a)
        for (int b = 1; b <= s.n; ++b)
            t.entries.push_back({"eta[" + ij(a, b) + "]", "\\eta_{" + ij(a, b) + "}", DiffPoly(s.eta[a][b])});
    for (int a = 1; a <= s.n; ++a)
        for (int b = 1; b <= s.n; ++b) t.entries.push_back({"g[" + ij(a, b) + "]", "g^{" + ij(a, b) + "}", s.g[a][b]});
    for (size_t r = 0; r < s.R.size(); ++r)
        for (int x = 1; x <= s.n; ++x)
            for (int a = 1; a <= s.n; ++a)
                if (!s.R[r][x][a].is_zero())
                    t.entries.push_back({"R" + std::to_string(r + 1) + "[" + ij(x, a) + "]",
                                         "(R_{" + std::to_string(r + 1) + "})^{" + std::to_string(x) + "}_{" +
                                             std::to_string(a) + "}",
                                         DiffPoly(s.R[r][x][a])});
}

LatexStyle style_of(const SuiteTarget& on) { return on.frobenius ? on.frobenius->spec().style() : LatexStyle::kdv(); }

}  // namespace

Table build_table(const std::string& target, const SuiteTarget& on, const SuiteOptions& opt) {
    Table t;
    t.target = target;
    t.style = style_of(on);
    t.environment = {{"cover", on.name()}, {"spec_hash", on.spec_hash}, {"options", opt.to_json()}};
    const TauCover& c = on.cover();
    auto frobenius_only = [&] {
        if (!on.frobenius) throw std::invalid_argument("target " + target + " needs a Frobenius spec");
    };
    if (target == "spec") {
        frobenius_only();
        add_spec(t, on.frobenius->spec());
    } else if (target == "h") {
        add_h(t, c, opt);
    } else if (target == "omega") {
        add_omega(t, c, opt);
    } else if (target == "phi") {
        add_phi(t, c, opt);
    } else if (target == "delta") {
        frobenius_only();
        for (int p = 0; p <= opt.pmax; ++p)
            for (int a = 1; a <= c.n(); ++a)
                for (int k = 0; k <= opt.kmax; ++k)
                    for (int n = k + 1; n <= opt.kmax; ++n)
                        t.entries.push_back({"delta[" + ij(a, p) + ";" + ij(k, n) + "]",
                                             "\\Delta^{" + ij(k, n) + "}_{" + ij(a, p) + "}",
                                             on.frobenius->delta(a, p, k, n)});
    } else if (target == "flows") {
        add_flows(t, c, opt);
    } else if (target == "kdv") {
        if (!on.kdv) throw std::invalid_argument("target kdv runs without --spec or with --spec kdv");
        t.style = LatexStyle::kdv();
        for (int n = 0; n <= opt.nmax; ++n)
            t.entries.push_back({"R[" + std::to_string(n) + "]", "R_{" + std::to_string(n) + "}", on.kdv->R(n)});
    } else if (target == "virasoro") {
        add_virasoro(t, on, opt);
    } else if (target == "tau-cover") {
        add_h(t, c, opt);
        add_omega(t, c, opt);
        add_phi(t, c, opt);
        nlohmann::json res = nlohmann::json::array();
        for (auto [a, p] : c.resonant()) res.push_back({a, p});
        t.environment["resonant"] = res;
    } else {
        throw std::invalid_argument("no table for target " + target);
    }
    return t;
}

Report limit_report(const std::string& target, const SuiteOptions& opt) {
    SuiteTarget kdv = kdv_target();
    if (target == "kdv") {
        Report r = run_suites(target, find_suites("kdv", "dispersionless", kdv), kdv, opt, default_threads());
        return r;
    }
    if (target != "h" && target != "omega" && target != "phi" && target != "flows")
        throw std::invalid_argument("limit supports kdv, h, omega, phi and flows");
    SuiteTarget onedim = frobenius_target(builtin_spec_json("onedim"));
    Table a = build_table(target, kdv, opt), b = build_table(target, onedim, opt);
    Report r;
    r.target = target;
    r.suites = {"limit"};
    for (size_t i = 0; i < a.entries.size(); ++i) {
        DiffPoly res = a.entries[i].value.eps_to_zero() - b.entries[i].value;
        r.checks.push_back(ReportCheck{"limit:" + a.entries[i].key, res.is_zero(), 0, res, {}});
    }
    r.environment = {{"cover", "kdv"}, {"against", "onedim"}, {"spec_hash", onedim.spec_hash}, {"options", opt.to_json()}};
    return r;
}

nlohmann::json table_to_json(const Table& t) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : t.entries) entries.push_back({{"key", e.key}, {"latex", e.latex_key}, {"value", to_json(e.value)}});
    nlohmann::json doc{{"target", t.target},
                       {"environment", t.environment},
                       {"style", {{"fields", t.style.fields}, {"single_field", t.style.single_field}}},
                       {"entries", std::move(entries)}};
    if (t.timestamp) doc["timestamp"] = *t.timestamp;
    return doc;
}

Table table_from_json(const nlohmann::json& j) {
    Table t;
    try {
        t.target = j.at("target").get<std::string>();
        t.environment = j.at("environment");
        t.style.fields = j.at("style").at("fields").get<std::vector<std::string>>();
        t.style.single_field = j.at("style").at("single_field").get<bool>();
        if (j.contains("timestamp")) t.timestamp = j.at("timestamp").get<std::string>();
        for (const auto& e : j.at("entries"))
            t.entries.push_back(
                {e.at("key").get<std::string>(), e.at("latex").get<std::string>(), from_json(e.at("value"))});
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed table: ") + e.what());
    }
    return t;
}

std::string table_to_latex(const Table& t) {
    if (t.entries.empty()) return {};
    std::ostringstream os;
    os << "\\begin{align*}\n";
    for (size_t i = 0; i < t.entries.size(); ++i) {
        os << "&" << t.entries[i].latex_key << " = " << to_latex(t.entries[i].value, t.style);
        os << (i + 1 < t.entries.size() ? ",\\\\\n" : ".\n");
    }
    os << "\\end{align*}\n";
    return os.str();
}

std::string table_to_text(const Table& t) {
    std::ostringstream os;
    for (const auto& e : t.entries) os << e.key << " = " << e.value.to_string() << "\n";
    return os.str();
}

}  // namespace supertau::cli
