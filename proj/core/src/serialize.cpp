#include "supertau/serialize.hpp"

#include <regex>
#include <sstream>

#include "supertau/errors.hpp"

namespace supertau {

namespace {

std::string sup(int k) {
    std::string s = std::to_string(k);
    return s.size() == 1 ? "^" + s : "^{" + s + "}";
}

std::string primes(int s) {
    if (s == 0) return "";
    if (s <= 3) return std::string(static_cast<size_t>(s), '\'');
    return "^{(" + std::to_string(s) + ")}";
}

std::string field_name(int alpha, const LatexStyle& st) {
    if (alpha >= 1 && static_cast<size_t>(alpha) <= st.fields.size()) return st.fields[alpha - 1];
    return "v^{" + std::to_string(alpha) + "}";
}

std::string idx(int alpha, int k, const LatexStyle& st) {
    if (st.single_field) return "_{" + std::to_string(k) + "}";
    return "_{" + std::to_string(alpha) + "," + std::to_string(k) + "}";
}

// A factor that needs brackets before a power is applied.
bool compound(const std::string& s) { return s.find('\'') != std::string::npos || s.find('^') != std::string::npos; }

}  // namespace

std::string to_latex(Gen g, const LatexStyle& st) {
    switch (g.kind()) {
        case Kind::EvenJet: {
            std::string base = field_name(g.alpha(), st);
            if (g.deriv() == 0) return base;
            if (g.deriv() > 3 || base.find('^') != std::string::npos) return "\\partial_x^{" + std::to_string(g.deriv()) + "}" + base;
            return base + primes(g.deriv());
        }
        case Kind::OddSigma: {
            std::string base = g.level() == 0
                                   ? (st.single_field ? std::string("\\theta") : "\\theta_{" + std::to_string(g.alpha()) + "}")
                                   : "\\sigma" + idx(g.alpha(), g.level(), st);
            return base + primes(g.deriv());
        }
        case Kind::OnePoint: return "f" + idx(g.alpha(), g.level(), st);
        case Kind::EvenTime:
            if (st.single_field) return "t_{" + std::to_string(g.level()) + "}";
            return "t^{" + std::to_string(g.alpha()) + "," + std::to_string(g.level()) + "}";
        case Kind::OddTime: return "\\tau_{" + std::to_string(g.level()) + "}";
        case Kind::PhiGen: return "\\Phi^{" + std::to_string(g.phi_n()) + "}" + idx(g.alpha(), g.level(), st);
        case Kind::ExpGen: return "e^{" + field_name(g.alpha(), st) + "}";
    }
    return "?";
}

std::string to_latex(const DiffPoly& p, const LatexStyle& st) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        std::vector<std::string> fs;
        if (t.mono.eps) fs.push_back("\\varepsilon" + sup(t.mono.eps));
        if (t.mono.c0) fs.push_back(t.mono.c0 == 1 ? "c_0" : "c_0" + sup(t.mono.c0));
        for (const auto& f : t.mono.even) {
            Gen g{f.first};
            if (g.kind() == Kind::ExpGen) {
                std::string v = field_name(g.alpha(), st);
                if (f.second == 1) fs.push_back("e^{" + v + "}");
                else if (f.second == -1) fs.push_back("e^{-" + v + "}");
                else fs.push_back("e^{" + std::to_string(f.second) + v + "}");
                continue;
            }
            std::string s = to_latex(g, st);
            if (f.second != 1) s = (compound(s) ? "(" + s + ")" : s) + sup(f.second);
            fs.push_back(s);
        }
        for (uint64_t k : t.mono.odd) fs.push_back(to_latex(Gen{k}, st));
        std::string mono;
        for (size_t i = 0; i < fs.size(); ++i) mono += (i ? " " : "") + fs[i];

        bool neg = t.coeff.sign() < 0;
        std::string num = t.coeff.num_str();
        if (neg) num = num.substr(1);
        std::string den = t.coeff.den_str();
        std::string body;
        std::string top = mono.empty() ? num : (num == "1" ? mono : num + " " + mono);
        body = den == "1" ? top : "\\frac{" + top + "}{" + den + "}";
        if (first)
            os << (neg ? "-" : "") << body;
        else
            os << (neg ? " - " : " + ") << body;
        first = false;
    }
    return os.str();
}

nlohmann::json to_json(const DiffPoly& p) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : p.terms()) {
        nlohmann::json even = nlohmann::json::array();
        for (const auto& f : t.mono.even) even.push_back({gen_name(Gen{f.first}), f.second});
        nlohmann::json odd = nlohmann::json::array();
        for (uint64_t k : t.mono.odd) odd.push_back(gen_name(Gen{k}));
        nlohmann::json term = {t.coeff.to_string(), even, odd, t.mono.eps};
        if (t.mono.c0) term.push_back(t.mono.c0);
        out.push_back(std::move(term));
    }
    return out;
}

DiffPoly from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ValidationError("polynomial must be a JSON array of terms");
    std::vector<Term> terms;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() < 4) throw ValidationError("malformed term: " + t.dump());
        DiffPoly m = DiffPoly(Rational::parse(t[0].get<std::string>()));
        for (const auto& f : t[1]) m = m * DiffPoly::gen(parse_gen_name(f[0].get<std::string>()), f[1].get<int>());
        for (const auto& o : t[2]) m = m * DiffPoly::gen(parse_gen_name(o.get<std::string>()));
        m = m * DiffPoly::eps(t[3].get<int>());
        if (t.size() > 4) m = m * DiffPoly::c0(t[4].get<int>());
        for (auto& x : m.terms()) terms.push_back(x);
    }
    return DiffPoly::from_terms(std::move(terms));
}

Gen parse_gen_name(const std::string& s) {
    static const std::regex jet(R"(u(\d+)_(\d+))"), f(R"(f(\d+)_(\d+))"), t(R"(t(\d+)_(\d+))"),
        ex(R"(exp(\d+))"), th(R"(theta(\d+)_(\d+))"), sg(R"(sigma(\d+)_(\d+)_(\d+))"),
        ph(R"(Phi(\d+)_(\d+)\^(\d+))"), tau(R"(tau(\d+))");
    std::smatch m;
    auto i = [&m](size_t k) { return std::stoi(m[k].str()); };
    if (std::regex_match(s, m, jet)) return Gen::jet(i(1), i(2));
    if (std::regex_match(s, m, f)) return Gen::onepoint(i(1), i(2));
    if (std::regex_match(s, m, t)) return Gen::time(i(1), i(2));
    if (std::regex_match(s, m, ex)) return Gen::expo(i(1));
    if (std::regex_match(s, m, th)) return Gen::theta(i(1), i(2));
    if (std::regex_match(s, m, sg)) return Gen::sigma(i(1), i(2), i(3));
    if (std::regex_match(s, m, ph)) return Gen::phi(i(1), i(2), i(3));
    if (std::regex_match(s, m, tau)) return Gen::otime(i(1));
    throw ValidationError("unknown generator name: " + s);
}

}  // namespace supertau
