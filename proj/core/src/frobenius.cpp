#include "supertau/frobenius.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "supertau/errors.hpp"

namespace supertau {

namespace {

using json = nlohmann::json;

Rational rational_of(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw ValidationError("expected a rational number, got " + j.dump());
}

json rational_json(const Rational& r) { return r.to_string(); }

bool is_function(const DiffPoly& p) {
    return !p.any_gen([](Gen g) {
        if (g.kind() == Kind::ExpGen) return false;
        return !(g.kind() == Kind::EvenJet && g.deriv() == 0);
    });
}

DiffPoly function_from_terms(const json& terms, int n) {
    DiffPoly r;
    for (const auto& t : terms) {
        if (!t.is_array() || t.size() != 3) throw ValidationError("function term must be [coeff, exponents, exp-multiples]");
        const auto& ex = t[1];
        const auto& qs = t[2];
        if (static_cast<int>(ex.size()) != n || static_cast<int>(qs.size()) != n)
            throw ValidationError("exponent vectors must have length n");
        DiffPoly m(rational_of(t[0]));
        for (int a = 1; a <= n; ++a) {
            int e = ex[a - 1].get<int>();
            int q = qs[a - 1].get<int>();
            if (e < 0) throw ValidationError("negative field exponent");
            if (e) m = m * DiffPoly::gen(Gen::jet(a, 0), e);
            if (q) m = m * DiffPoly::gen(Gen::expo(a), q);
        }
        r += m;
    }
    return r;
}

json function_to_terms(const DiffPoly& p, int n) {
    json out = json::array();
    for (const auto& t : p.terms()) {
        std::vector<int> ex(n, 0), qs(n, 0);
        for (const auto& [key, pw] : t.mono.even) {
            Gen g{key};
            if (g.kind() == Kind::ExpGen)
                qs[g.alpha() - 1] = pw;
            else
                ex[g.alpha() - 1] = pw;
        }
        out.push_back(json::array({t.coeff.to_string(), ex, qs}));
    }
    return out;
}

std::string idx(std::initializer_list<int> is) {
    std::string s;
    for (int i : is) s += (s.empty() ? "" : ",") + std::to_string(i);
    return s;
}

// Solve A x = b over the rationals; free variables are set to zero.
// Returns false when inconsistent.
bool solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational>& x,
                  std::vector<bool>& free_var) {
    size_t rows = a.size(), cols = x.size();
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        std::swap(b[piv], b[r]);
        Rational s = Rational(1) / a[r][c];
        for (auto& v : a[r]) v *= s;
        b[r] *= s;
        for (size_t o = 0; o < rows; ++o) {
            if (o == r || a[o][c].is_zero()) continue;
            Rational f = a[o][c];
            for (size_t k = 0; k < cols; ++k) a[o][k] -= f * a[r][k];
            b[o] -= f * b[r];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    for (size_t o = r; o < rows; ++o)
        if (!b[o].is_zero()) return false;
    std::fill(x.begin(), x.end(), Rational(0));
    free_var.assign(cols, true);
    for (size_t i = 0; i < pivot_col.size(); ++i) {
        x[pivot_col[i]] = b[i];
        free_var[pivot_col[i]] = false;
    }
    return true;
}

const char* kOneDim = R"({
  "name": "onedim",
  "n": 1,
  "d": "0",
  "fields": ["v"],
  "potential": [["1/6", [3], [0]]],
  "euler": {"linear": ["1"], "constants": ["0"]},
  "mu": ["0"],
  "R": [],
  "h_table": [
    {"alpha": 1, "p": 0, "terms": [["1", [1], [0]]]},
    {"alpha": 1, "p": 1, "terms": [["1/2", [2], [0]]]},
    {"alpha": 1, "p": 2, "terms": [["1/6", [3], [0]]]}
  ]
})";

const char* kCP1 = R"({
  "name": "cp1",
  "n": 2,
  "d": "1",
  "fields": ["v", "u"],
  "potential": [["1/2", [2, 1], [0, 0]], ["1", [0, 0], [0, 1]]],
  "euler": {"linear": ["1", "0"], "constants": ["0", "2"]},
  "mu": ["-1/2", "1/2"],
  "R": [[["0", "0"], ["2", "0"]]],
  "h_table": [
    {"alpha": 1, "p": 0, "terms": [["1", [0, 1], [0, 0]]]},
    {"alpha": 2, "p": 0, "terms": [["1", [1, 0], [0, 0]]]},
    {"alpha": 1, "p": 1, "terms": [["1", [1, 1], [0, 0]]]},
    {"alpha": 2, "p": 1, "terms": [["1/2", [2, 0], [0, 0]], ["1", [0, 0], [0, 1]]]},
    {"alpha": 1, "p": 2, "terms": [["1/2", [2, 1], [0, 0]], ["1", [0, 1], [0, 1]], ["-2", [0, 0], [0, 1]]]},
    {"alpha": 2, "p": 2, "terms": [["1/6", [3, 0], [0, 0]], ["1", [1, 0], [0, 1]]]}
  ]
})";

}  // namespace

DiffPoly FrobeniusSpec::apply(const VectorField& x, const DiffPoly& f) const {
    DiffPoly r;
    for (int a = 1; a <= n; ++a)
        if (!x[a].is_zero()) r += x[a] * partial_field(f, a);
    return r;
}

VectorField FrobeniusSpec::product(const VectorField& x, const VectorField& y) const {
    VectorField r(n + 1);
    for (int gi = 1; gi <= n; ++gi)
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                if (!c[gi][a][b].is_zero()) r[gi] += c[gi][a][b] * x[a] * y[b];
    return r;
}

VectorField FrobeniusSpec::euler_power(int k) const {
    VectorField r(n + 1);
    r[1] = DiffPoly(1);
    for (int i = 0; i < k; ++i) r = product(r, euler);
    return r;
}

LatexStyle FrobeniusSpec::style() const { return LatexStyle{fields, n == 1}; }

FrobeniusSpec parse_spec(const json& doc) {
    try {
        FrobeniusSpec s;
        s.name = doc.value("name", std::string("spec"));
        s.n = doc.at("n").get<int>();
        if (s.n < 1) throw ValidationError("dimension must be positive");
        int n = s.n;
        s.d = rational_of(doc.at("d"));
        if (doc.contains("fields")) s.fields = doc.at("fields").get<std::vector<std::string>>();
        if (!s.fields.empty() && static_cast<int>(s.fields.size()) != n)
            throw ValidationError("fields must list n names");
        s.potential = function_from_terms(doc.at("potential"), n);
        auto vec = [&](const json& j) {
            if (static_cast<int>(j.size()) != n) throw ValidationError("vector of length n expected");
            std::vector<Rational> v(n + 1);
            for (int a = 1; a <= n; ++a) v[a] = rational_of(j[a - 1]);
            return v;
        };
        s.euler_linear = vec(doc.at("euler").at("linear"));
        s.euler_constants = vec(doc.at("euler").at("constants"));
        s.mu = vec(doc.at("mu"));
        for (const auto& m : doc.value("R", json::array())) {
            if (static_cast<int>(m.size()) != n) throw ValidationError("R matrices must be n x n");
            RMatrix r(n + 1, std::vector<Rational>(n + 1));
            for (int i = 1; i <= n; ++i) {
                if (static_cast<int>(m[i - 1].size()) != n) throw ValidationError("R matrices must be n x n");
                for (int j = 1; j <= n; ++j) r[i][j] = rational_of(m[i - 1][j - 1]);
            }
            s.R.push_back(std::move(r));
        }
        for (const auto& e : doc.value("h_table", json::array())) {
            int a = e.at("alpha").get<int>(), p = e.at("p").get<int>();
            if (a < 1 || a > n || p < 0) throw ValidationError("h_table index out of range");
            s.h_table[{a, p}] = function_from_terms(e.at("terms"), n);
        }

        // eta_{ab} = d_1 d_a d_b F, constant and invertible.
        DiffPoly f1 = partial_field(s.potential, 1);
        s.eta.assign(n + 1, std::vector<Rational>(n + 1));
        for (int a = 1; a <= n; ++a) {
            DiffPoly fa = partial_field(f1, a);
            for (int b = 1; b <= n; ++b) {
                DiffPoly e = partial_field(fa, b);
                if (!e.is_constant()) throw ValidationError("eta: first metric is not constant");
                s.eta[a][b] = e.constant_term();
            }
        }
        try {
            s.eta_inv = matrix_inverse(s.eta);
        } catch (const NotInvertible&) {
            throw ValidationError("eta: first metric is degenerate");
        }

        std::vector<std::vector<std::vector<DiffPoly>>> third(
            n + 1, std::vector<std::vector<DiffPoly>>(n + 1, std::vector<DiffPoly>(n + 1)));
        for (int a = 1; a <= n; ++a) {
            DiffPoly fa = partial_field(s.potential, a);
            for (int b = 1; b <= n; ++b) {
                DiffPoly fab = partial_field(fa, b);
                for (int z = 1; z <= n; ++z) third[a][b][z] = partial_field(fab, z);
            }
        }
        auto cube = [n] {
            return std::vector<std::vector<std::vector<DiffPoly>>>(
                n + 1, std::vector<std::vector<DiffPoly>>(n + 1, std::vector<DiffPoly>(n + 1)));
        };
        s.c = cube();
        for (int gi = 1; gi <= n; ++gi)
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b)
                    for (int z = 1; z <= n; ++z)
                        if (!s.eta_inv[gi][z].is_zero()) s.c[gi][a][b] += s.eta_inv[gi][z] * third[z][a][b];
        s.c_up = cube();
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int gi = 1; gi <= n; ++gi)
                    for (int z = 1; z <= n; ++z)
                        if (!s.eta_inv[a][z].is_zero()) s.c_up[a][b][gi] += s.eta_inv[a][z] * s.c[b][z][gi];
        s.euler.assign(n + 1, DiffPoly());
        for (int a = 1; a <= n; ++a)
            s.euler[a] = s.euler_linear[a] * field(a) + DiffPoly(s.euler_constants[a]);
        s.g.assign(n + 1, std::vector<DiffPoly>(n + 1));
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int e = 1; e <= n; ++e) s.g[a][b] += s.euler[e] * s.c_up[a][b][e];
        s.gamma = cube();
        Rational half(1, 2);
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int gi = 1; gi <= n; ++gi) s.gamma[a][b][gi] = (half - s.mu[b]) * s.c_up[a][b][gi];
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed spec document: ") + e.what());
    }
}

std::vector<CheckResult> validate_spec(const FrobeniusSpec& s) {
    std::vector<CheckResult> out;
    int n = s.n;
    Rational half(1, 2);
    if (!is_function(s.potential)) out.push_back({"potential", false, s.potential, "potential must be a function of v"});
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b)
            for (int gi = 1; gi <= n; ++gi)
                for (int l = 1; l <= n; ++l) {
                    DiffPoly r;
                    for (int e = 1; e <= n; ++e) r += s.c[e][a][b] * s.c[l][e][gi] - s.c[e][b][gi] * s.c[l][e][a];
                    if (a <= gi) out.push_back(check_zero("wdvv[" + idx({a, b, gi, l}) + "]", r));
                }
    }
    out.push_back(check_zero("mu-unit", DiffPoly(s.mu[1] + s.d * half)));
    for (int a = 1; a <= n; ++a) {
        out.push_back(check_zero("euler-linear[" + idx({a}) + "]",
                                 DiffPoly(s.euler_linear[a] - (Rational(1) - s.d * half - s.mu[a]))));
        for (int b = 1; b <= n; ++b)
            out.push_back(check_zero("mu-eta[" + idx({a, b}) + "]", DiffPoly((s.mu[a] + s.mu[b]) * s.eta[a][b])));
    }
    for (int gi = 1; gi <= n; ++gi)
        for (int a = 1; a <= n; ++a)
            for (int b = a; b <= n; ++b) {
                DiffPoly r = s.apply_euler(s.c[gi][a][b]) - (s.mu[a] + s.mu[b] - s.mu[gi] - s.mu[1]) * s.c[gi][a][b];
                out.push_back(check_zero("c-hom[" + idx({gi, a, b}) + "]", r));
            }
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int gi = 1; gi <= n; ++gi) {
                DiffPoly r = partial_field(s.g[a][b], gi) - s.gamma[a][b][gi] - s.gamma[b][a][gi];
                out.push_back(check_zero("g-gam[" + idx({a, b, gi}) + "]", r));
            }
    for (size_t r = 0; r < s.R.size(); ++r)
        for (int x = 1; x <= n; ++x)
            for (int a = 1; a <= n; ++a) {
                Rational v = (s.mu[x] - s.mu[a] - Rational(static_cast<int64_t>(r + 1))) * s.R[r][x][a];
                out.push_back(check_zero("mu-R[" + idx({static_cast<int>(r + 1), x, a}) + "]", DiffPoly(v)));
            }
    return out;
}

FrobeniusSpec load_spec(const json& doc) {
    FrobeniusSpec s = parse_spec(doc);
    for (const auto& r : validate_spec(s))
        if (!r.pass) throw ValidationError(r.id + (r.note.empty() ? "" : ": " + r.note) + " violated");
    return s;
}

FrobeniusSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read spec file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("spec file is not valid JSON: " + std::string(e.what()));
    }
    return load_spec(doc);
}

json spec_to_json(const FrobeniusSpec& s) {
    int n = s.n;
    json j;
    j["name"] = s.name;
    j["n"] = n;
    j["d"] = s.d.to_string();
    if (!s.fields.empty()) j["fields"] = s.fields;
    j["potential"] = function_to_terms(s.potential, n);
    json lin = json::array(), con = json::array(), mu = json::array();
    for (int a = 1; a <= n; ++a) {
        lin.push_back(rational_json(s.euler_linear[a]));
        con.push_back(rational_json(s.euler_constants[a]));
        mu.push_back(rational_json(s.mu[a]));
    }
    j["euler"] = {{"linear", lin}, {"constants", con}};
    j["mu"] = mu;
    json rs = json::array();
    for (const auto& r : s.R) {
        json m = json::array();
        for (int i = 1; i <= n; ++i) {
            json row = json::array();
            for (int k = 1; k <= n; ++k) row.push_back(rational_json(r[i][k]));
            m.push_back(row);
        }
        rs.push_back(m);
    }
    j["R"] = rs;
    if (!s.h_table.empty()) {
        json ht = json::array();
        for (const auto& [key, h] : s.h_table)
            ht.push_back({{"alpha", key.first}, {"p", key.second}, {"terms", function_to_terms(h, n)}});
        j["h_table"] = ht;
    }
    return j;
}

json builtin_spec_json(const std::string& name) {
    if (name == "onedim") return json::parse(kOneDim);
    if (name == "cp1") return json::parse(kCP1);
    throw ValidationError("unknown built-in spec " + name);
}

std::vector<std::string> builtin_spec_names() { return {"onedim", "cp1"}; }

DiffPoly integrate_field(const DiffPoly& f, int alpha) {
    Gen v = Gen::jet(alpha, 0), e = Gen::expo(alpha);
    DiffPoly out;
    for (const auto& t : f.terms()) {
        if (!t.mono.odd.empty()) throw UnsupportedGenerators("integrate_field: odd generators");
        Monomial rest;
        rest.eps = t.mono.eps;
        rest.c0 = t.mono.c0;
        int a = 0, q = 0;
        for (const auto& [key, pw] : t.mono.even) {
            Gen g{key};
            if (g == v)
                a = pw;
            else if (g == e)
                q = pw;
            else if (g.kind() == Kind::EvenJet && g.deriv() > 0)
                throw UnsupportedGenerators("integrate_field: jet variables");
            else
                rest.even.push_back({key, pw});
        }
        DiffPoly base = DiffPoly::monomial(rest, t.coeff);
        if (q == 0) {
            out += base * DiffPoly::gen(v, a + 1) * Rational(1, a + 1);
            continue;
        }
        // int x^a e^{qx} = e^{qx} sum_j (-1)^j a!/(a-j)! x^{a-j} / q^{j+1}
        DiffPoly ex = base * DiffPoly::gen(e, q);
        Rational fall(1), qpow(q);
        for (int j = 0; j <= a; ++j) {
            Rational coef = fall / qpow;
            if (j % 2) coef = -coef;
            out += (a - j ? DiffPoly::gen(v, a - j) : DiffPoly(1)) * ex * coef;
            fall *= Rational(a - j);
            qpow *= Rational(q);
        }
    }
    return out;
}

DiffPoly potential_of(const VectorField& w, int n) {
    DiffPoly g;
    for (int a = 1; a <= n; ++a) {
        DiffPoly r = w[a] - partial_field(g, a);
        if (!r.is_zero()) g += integrate_field(r, a);
    }
    for (int a = 1; a <= n; ++a)
        if (partial_field(g, a) != w[a]) throw SolveError("gradient field is not closed");
    return g;
}

std::vector<std::pair<int, int>> detect_resonance(const FrobeniusSpec& spec, int pmax) {
    std::vector<std::pair<int, int>> out;
    for (int p = 1; p <= pmax; ++p)
        for (int a = 1; a <= spec.n; ++a)
            if ((Rational(1 - 2 * p) - Rational(2) * spec.mu[a]).is_zero()) out.push_back({a, p});
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

FrobeniusCover::FrobeniusCover(std::shared_ptr<const FrobeniusSpec> spec, int resonance_pmax)
    : spec_(std::move(spec)), alg_(std::make_shared<Algebra>(spec_->n)) {
    resonant_ = detect_resonance(*spec_, resonance_pmax);
    // Row beta of the recursion integrates when Gamma^{beta gamma}_delta = d_delta g^{beta gamma}.
    const auto& s0 = *spec_;
    std::vector<bool> exact(s0.n + 1, true);
    for (int b = 1; b <= s0.n; ++b)
        for (int c = 1; c <= s0.n && exact[b]; ++c)
            for (int d = 1; d <= s0.n; ++d)
                if (s0.gamma[b][c][d] != partial_field(s0.g[b][c], d)) {
                    exact[b] = false;
                    break;
                }
    related_.assign(s0.n + 1, false);
    for (int a = 1; a <= s0.n; ++a) {
        bool ok = true;
        for (int b = 1; b <= s0.n; ++b)
            if (!s0.eta[a][b].is_zero() && !exact[b]) ok = false;
        related_[a] = ok;
    }
    alg_->set_sigma_rule([this](const Algebra& a, int alpha, int k) { return sigma_rule(a, alpha, k); });
    alg_->set_onepoint_rule([this](const Algebra&, Gen g) { return h(g.alpha(), g.level()); });
    alg_->set_phi_rule([this](const Algebra& a, Gen g) {
        const auto& s = *spec_;
        DiffPoly r;
        DiffPoly hp = h(g.alpha(), g.level());
        for (int b = 1; b <= s.n; ++b) {
            DiffPoly db = partial_field(hp, b);
            if (db.is_zero()) continue;
            for (int c = 1; c <= s.n; ++c)
                if (!s.eta_inv[b][c].is_zero()) r += s.eta_inv[b][c] * db * a.nf_sigma(c, g.phi_n(), 1);
        }
        return r;
    });
}

std::vector<std::pair<Gen, DiffPoly>> FrobeniusCover::sigma_relations(int kmax) const {
    const auto& s = *spec_;
    std::vector<std::pair<Gen, DiffPoly>> out;
    for (int k = 1; k <= kmax; ++k)
        for (int a = 1; a <= s.n; ++a) {
            if (!related_[a]) continue;
            DiffPoly r;
            for (int b = 1; b <= s.n; ++b) {
                if (s.eta[a][b].is_zero()) continue;
                for (int c = 1; c <= s.n; ++c)
                    if (!s.g[b][c].is_zero()) r += s.eta[a][b] * s.g[b][c] * sigma_poly(c, k - 1);
            }
            out.emplace_back(Gen::sigma(a, k), r);
        }
    return out;
}

DiffPoly FrobeniusCover::reduce(const DiffPoly& p) const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    std::function<const DiffPoly*(Gen)> sub = [&](Gen g) -> const DiffPoly* {
        if (g.kind() != Kind::OddSigma || g.deriv() != 0 || g.level() == 0 || !related_[g.alpha()]) return nullptr;
        auto key = std::make_pair(g.alpha(), g.level());
        auto it = reduced_sigma_.find(key);
        if (it != reduced_sigma_.end()) return &it->second;
        auto rel = sigma_relations(g.level());
        for (const auto& [h, expr] : rel)
            if (h == g) return &reduced_sigma_.emplace(key, substitute_odd(expr, sub)).first->second;
        return nullptr;
    };
    return substitute_odd(p, sub);
}

DiffPoly FrobeniusCover::sigma_rule(const Algebra& alg, int alpha, int k) const {
    const auto& s = *spec_;
    int n = s.n;
    DiffPoly r;
    for (int b = 1; b <= n; ++b) {
        if (s.eta[alpha][b].is_zero()) continue;
        DiffPoly inner;
        for (int c = 1; c <= n; ++c) {
            if (!s.g[b][c].is_zero()) inner += s.g[b][c] * alg.nf_sigma(c, k - 1, 1);
            for (int d = 1; d <= n; ++d)
                if (!s.gamma[b][c][d].is_zero())
                    inner += s.gamma[b][c][d] * DiffPoly::gen(Gen::jet(d, 1)) * sigma_poly(c, k - 1);
        }
        r += s.eta[alpha][b] * inner;
    }
    return r;
}

void FrobeniusCover::extend_h(int target) const {
    const auto& s = *spec_;
    int n = s.n;
    if (h_.empty()) {
        std::vector<DiffPoly> lvl(n + 1);
        for (int a = 1; a <= n; ++a)
            for (int c = 1; c <= n; ++c)
                if (!s.eta[a][c].is_zero()) lvl[a] += s.eta[a][c] * field(c);
        h_.push_back(std::move(lvl));
    }
    while (static_cast<int>(h_.size()) <= target) {
        int p = static_cast<int>(h_.size()) - 1;
        int lvl_index = p + 1;
        std::vector<DiffPoly> next(n + 1);
        std::vector<std::pair<int, int>> free_slots;  // (alpha, beta)
        for (int a = 1; a <= n; ++a) {
            const DiffPoly& hp = h_[p][a];
            VectorField grad(n + 1);
            for (int l = 1; l <= n; ++l) grad[l] = partial_field(hp, l);
            VectorField w(n + 1);
            for (int b = 1; b <= n; ++b) {
                VectorField col(n + 1);
                for (int x = 1; x <= n; ++x)
                    for (int l = 1; l <= n; ++l)
                        if (!s.c[l][x][b].is_zero()) col[x] += s.c[l][x][b] * grad[l];
                w[b] = potential_of(col, n);
            }
            for (int b = 1; b <= n; ++b) {
                Rational coef = Rational(lvl_index) + s.mu[a] + s.mu[b];
                DiffPoly res = s.apply_euler(w[b]) - coef * w[b];
                for (int k = 1; k <= lvl_index && k <= static_cast<int>(s.R.size()); ++k)
                    for (int x = 1; x <= n; ++x)
                        if (!s.R[k - 1][x][a].is_zero())
                            res -= s.R[k - 1][x][a] * partial_field(h_[lvl_index - k][x], b);
                if (!res.is_constant())
                    throw SolveError("homogeneity cannot be met for h[" + idx({a, lvl_index}) + "]");
                Rational kb;
                bool fixed = false;
                if (b == 1) {
                    DiffPoly k1 = hp - w[1];
                    if (!k1.is_constant()) throw SolveError("unit-field recursion inconsistent at h[" + idx({a, lvl_index}) + "]");
                    kb = k1.constant_term();
                    fixed = true;
                    if (!coef.is_zero() && coef * kb != res.constant_term())
                        throw SolveError("homogeneity contradicts the unit-field recursion at h[" + idx({a, lvl_index}) + "]");
                    if (coef.is_zero() && !res.is_zero())
                        throw SolveError("homogeneity cannot be met for h[" + idx({a, lvl_index}) + "]");
                } else if (!coef.is_zero()) {
                    kb = res.constant_term() / coef;
                    fixed = true;
                } else if (!res.is_zero()) {
                    throw SolveError("homogeneity cannot be met for h[" + idx({a, lvl_index}) + "]");
                }
                if (!fixed) free_slots.push_back({a, b});
                if (!kb.is_zero()) w[b] += DiffPoly(kb);
            }
            next[a] = potential_of(w, n);
        }
        if (!free_slots.empty()) {
            // The normalization pairing fixes what homogeneity leaves open.
            size_t m = free_slots.size();
            std::vector<std::vector<Rational>> rows;
            std::vector<Rational> rhs;
            int sgn = lvl_index % 2 ? -1 : 1;
            for (int a = 1; a <= n; ++a)
                for (int b = a; b <= n; ++b) {
                    DiffPoly r;
                    for (int i = 0; i <= lvl_index; ++i) {
                        const DiffPoly& ha = i == lvl_index ? next[a] : h_[i][a];
                        const DiffPoly& hb = lvl_index - i == lvl_index ? next[b] : h_[lvl_index - i][b];
                        DiffPoly pair;
                        for (int x = 1; x <= n; ++x)
                            for (int y = 1; y <= n; ++y)
                                if (!s.eta_inv[x][y].is_zero())
                                    pair += s.eta_inv[x][y] * partial_field(ha, x) * partial_field(hb, y);
                        r += (lvl_index - i) % 2 ? -pair : pair;
                    }
                    if (!r.is_constant()) throw SolveError("normalization cannot be met at level " + std::to_string(lvl_index));
                    std::vector<Rational> row(m);
                    for (size_t j = 0; j < m; ++j) {
                        if (free_slots[j] == std::make_pair(a, b)) row[j] += Rational(1);
                        if (free_slots[j] == std::make_pair(b, a)) row[j] += Rational(sgn);
                    }
                    rows.push_back(row);
                    rhs.push_back(-r.constant_term());
                }
            std::vector<Rational> x(m);
            std::vector<bool> is_free;
            if (!solve_linear(rows, rhs, x, is_free))
                throw SolveError("normalization cannot be met at level " + std::to_string(lvl_index));
            for (size_t j = 0; j < m; ++j) {
                auto [a, b] = free_slots[j];
                if (!x[j].is_zero()) next[a] += x[j] * field(b);
                if (is_free[j]) gauge_.push_back({a, lvl_index, b});
            }
        }
        h_.push_back(std::move(next));
    }
}

DiffPoly FrobeniusCover::h(int alpha, int p) const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    extend_h(p);
    return h_[p][alpha];
}

std::vector<std::tuple<int, int, int>> FrobeniusCover::gauge() const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    return gauge_;
}

DiffPoly FrobeniusCover::n_pair(int alpha, int p, int beta, int q) const {
    const auto& s = *spec_;
    DiffPoly ha = h(alpha, p), hb = h(beta, q);
    DiffPoly r;
    for (int x = 1; x <= s.n; ++x) {
        DiffPoly dx = partial_field(ha, x);
        if (dx.is_zero()) continue;
        for (int y = 1; y <= s.n; ++y)
            if (!s.eta_inv[x][y].is_zero()) r += s.eta_inv[x][y] * dx * partial_field(hb, y);
    }
    if (p == 0 && q == 0) r -= DiffPoly(s.eta[alpha][beta]);
    return r;
}

DiffPoly FrobeniusCover::omega(int alpha, int p, int beta, int q) const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    auto key = std::make_tuple(alpha, p, beta, q);
    auto it = omega_.find(key);
    if (it != omega_.end()) return it->second;
    DiffPoly r = n_pair(alpha, p, beta, q + 1);
    if (p > 0) r -= omega(alpha, p - 1, beta, q + 1);
    omega_.emplace(key, r);
    return r;
}

DiffPoly FrobeniusCover::phi(int alpha, int p, int n) const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    if (p == 0) return sigma_poly(alpha, n);
    auto key = std::make_tuple(alpha, p, n);
    auto it = phi_.find(key);
    if (it != phi_.end()) return it->second;
    const auto& s = *spec_;
    Rational d = Rational(2 * p - 1, 2) + s.mu[alpha];
    DiffPoly r;
    if (d.is_zero()) {
        r = DiffPoly::gen(Gen::phi(alpha, p, n));
    } else {
        DiffPoly hp = h(alpha, p);
        for (int l = 1; l <= s.n; ++l) {
            Rational w = Rational(1, 2) + s.mu[l];
            if (w.is_zero()) continue;
            DiffPoly dl = partial_field(hp, l);
            if (dl.is_zero()) continue;
            for (int e = 1; e <= s.n; ++e)
                if (!s.eta_inv[l][e].is_zero()) r += (w * s.eta_inv[l][e]) * dl * sigma_poly(e, n);
        }
        for (int k = 1; k <= p && k <= static_cast<int>(s.R.size()); ++k)
            for (int x = 1; x <= s.n; ++x)
                if (!s.R[k - 1][x][alpha].is_zero()) r += s.R[k - 1][x][alpha] * phi(x, p - k, n);
        r -= phi(alpha, p - 1, n + 1);
        r *= -(Rational(1) / d);
    }
    phi_.emplace(key, r);
    return r;
}

DiffPoly FrobeniusCover::delta(int alpha, int p, int k, int n) const {
    if (k == n) return DiffPoly();
    if (k < n) return -delta(alpha, p, n, k);
    const auto& s = *spec_;
    const Algebra& alg = *alg_;
    DiffPoly hp = h(alpha, p);
    DiffPoly r;
    for (int gi = 1; gi <= s.n; ++gi) {
        DiffPoly w;
        for (int l = 1; l <= s.n; ++l)
            if (!s.eta_inv[gi][l].is_zero()) w += s.eta_inv[gi][l] * partial_field(hp, l);
        if (w.is_zero()) continue;
        DiffPoly sum;
        for (int d = 1; d <= s.n; ++d)
            for (int m = 1; m <= s.n; ++m) {
                if (s.gamma[d][m][gi].is_zero()) continue;
                for (int i = 0; i <= k - n - 1; ++i)
                    sum += s.gamma[d][m][gi] * sigma_poly(m, n + i) * alg.nf_sigma(d, k - i - 1, 1);
            }
        r += w * sum;
    }
    return r;
}

DiffPoly FrobeniusCover::t_image(int beta, int q, Gen g) const {
    const auto& s = *spec_;
    const Algebra& alg = *alg_;
    switch (g.kind()) {
        case Kind::EvenJet: {
            int a = g.alpha();
            DiffPoly hq = h(beta, q + 1);
            DiffPoly r;
            for (int c = 1; c <= s.n; ++c)
                if (!s.eta_inv[a][c].is_zero()) r += s.eta_inv[a][c] * alg.dx(partial_field(hq, c));
            return r;
        }
        case Kind::OddSigma: {
            int a = g.alpha(), k = g.level();
            DiffPoly ha = partial_field(h(beta, q + 1), a);
            DiffPoly r;
            for (int c = 1; c <= s.n; ++c)
                for (int e = 1; e <= s.n; ++e) {
                    if (s.eta_inv[c][e].is_zero()) continue;
                    DiffPoly coeff = partial_field(ha, e);
                    if (!coeff.is_zero()) r += s.eta_inv[c][e] * coeff * alg.nf_sigma(c, k, 1);
                }
            return r;
        }
        case Kind::OnePoint: return omega(g.alpha(), g.level(), beta, q);
        case Kind::PhiGen: return tau_flow(g.phi_n()).apply(omega(g.alpha(), g.level(), beta, q));
        default: throw AlgebraError("no t-flow image for " + gen_name(g));
    }
}

DiffPoly FrobeniusCover::tau_image(int m, Gen g) const {
    const auto& s = *spec_;
    const Algebra& alg = *alg_;
    switch (g.kind()) {
        case Kind::EvenJet: {
            int a = g.alpha();
            DiffPoly r;
            for (int b = 1; b <= s.n; ++b)
                if (!s.eta_inv[a][b].is_zero()) r += s.eta_inv[a][b] * alg.nf_sigma(b, m, 1);
            return r;
        }
        case Kind::OddSigma: {
            int a = g.alpha(), k = g.level();
            if (k == m) return DiffPoly();
            int lo = std::min(k, m), hi = std::max(k, m);
            DiffPoly r;
            for (int c = 1; c <= s.n; ++c)
                for (int b = 1; b <= s.n; ++b) {
                    if (s.gamma[c][b][a].is_zero()) continue;
                    for (int i = 0; i <= hi - lo - 1; ++i)
                        r += s.gamma[c][b][a] * sigma_poly(b, lo + i) * alg.nf_sigma(c, hi - i - 1, 1);
                }
            return k < m ? r : -r;
        }
        case Kind::OnePoint: return phi(g.alpha(), g.level(), m);
        case Kind::PhiGen: return delta(g.alpha(), g.level(), m, g.phi_n());
        default: throw AlgebraError("no tau-flow image for " + gen_name(g));
    }
}

// ---------------------------------------------------------------------------
// Checks

std::vector<CheckResult> FrobeniusCover::check_h(int pmax) const {
    const auto& s = *spec_;
    int n = s.n;
    std::vector<CheckResult> out;
    for (int a = 1; a <= n; ++a) {
        DiffPoly ini;
        for (int c = 1; c <= n; ++c) ini += s.eta[a][c] * field(c);
        out.push_back(check_zero("hamil-ini[" + idx({a, 0}) + "]", h(a, 0) - ini));
    }
    for (int p = 0; p < pmax; ++p)
        for (int gi = 1; gi <= n; ++gi) {
            out.push_back(check_zero("unit-rec[" + idx({gi, p + 1}) + "]", partial_field(h(gi, p + 1), 1) - h(gi, p)));
            for (int a = 1; a <= n; ++a)
                for (int b = a; b <= n; ++b) {
                    DiffPoly r = partial_field(partial_field(h(gi, p + 1), a), b);
                    for (int l = 1; l <= n; ++l) r -= s.c[l][a][b] * partial_field(h(gi, p), l);
                    out.push_back(check_zero("hamil-rec[" + idx({gi, p + 1, a, b}) + "]", r));
                }
        }
    for (int p = 0; p <= pmax; ++p)
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                DiffPoly db = partial_field(h(a, p), b);
                DiffPoly r = s.apply_euler(db) - (Rational(p) + s.mu[a] + s.mu[b]) * db;
                for (int k = 1; k <= p && k <= static_cast<int>(s.R.size()); ++k)
                    for (int x = 1; x <= n; ++x)
                        if (!s.R[k - 1][x][a].is_zero()) r -= s.R[k - 1][x][a] * partial_field(h(x, p - k), b);
                out.push_back(check_zero("homog[" + idx({a, p, b}) + "]", r));
            }
    for (int lvl = 1; lvl <= pmax; ++lvl)
        for (int a = 1; a <= n; ++a)
            for (int b = a; b <= n; ++b) {
                DiffPoly r;
                for (int i = 0; i <= lvl; ++i) {
                    DiffPoly pair = n_pair(a, i, b, lvl - i);
                    r += (lvl - i) % 2 ? -pair : pair;
                }
                out.push_back(check_zero("norm[" + idx({a, b, lvl}) + "]", r));
            }
    for (const auto& [key, golden] : s.h_table)
        if (key.second <= pmax)
            out.push_back(check_zero("golden-h[" + idx({key.first, key.second}) + "]", h(key.first, key.second) - golden));
    return out;
}

std::vector<CheckResult> FrobeniusCover::check_omega(int pmax) const {
    int n = spec_->n;
    std::vector<CheckResult> out;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            for (int tot = 1; tot <= pmax + 1; ++tot) {
                DiffPoly r;
                for (int i = 0; i <= tot; ++i) {
                    DiffPoly x = n_pair(a, tot - i, b, i);
                    r += i % 2 ? -x : x;
                }
                out.push_back(check_zero("omega-divisible[" + idx({a, b, tot}) + "]", r));
            }
            for (int p = 0; p <= pmax; ++p) {
                if (b == 1) out.push_back(check_zero("omg-ini-h[" + idx({a, p}) + "]", omega(a, p, 1, 0) - h(a, p)));
                out.push_back(check_zero("omg-ini-grad[" + idx({a, p, b}) + "]",
                                         omega(a, p, b, 0) - partial_field(h(a, p + 1), b)));
                for (int q = 0; p + q <= pmax; ++q)
                    out.push_back(check_zero("omega-sym[" + idx({a, p, b, q}) + "]", omega(a, p, b, q) - omega(b, q, a, p)));
            }
        }
    return out;
}

std::vector<CheckResult> FrobeniusCover::check_tau_symmetry(int total) const {
    int n = spec_->n;
    std::vector<CheckResult> out;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int p = 0; p <= total; ++p)
                for (int q = 0; p + q <= total; ++q) {
                    if (std::make_pair(a, p) > std::make_pair(b, q)) continue;
                    DiffPoly r = t_flow(b, q).apply(h(a, p)) - t_flow(a, p).apply(h(b, q));
                    out.push_back(check_zero("tau-symmetry[" + idx({a, p, b, q}) + "]", r));
                }
    return out;
}

std::vector<CheckResult> FrobeniusCover::check_phi(int pmax, int nmax) const {
    int n = spec_->n;
    std::vector<CheckResult> out;
    for (int a = 1; a <= n; ++a)
        for (int p = 0; p <= pmax; ++p)
            for (int k = 0; k <= nmax; ++k) {
                DiffPoly r = alg_->dx(phi(a, p, k)) - tau_flow(k).apply(h(a, p));
                out.push_back(check_zero("phi-def[" + idx({a, p, k}) + "]", r));
            }
    return out;
}

std::vector<CheckResult> FrobeniusCover::check_delta(int pmax, int kmax) const {
    int n = spec_->n;
    std::vector<CheckResult> out;
    for (int a = 1; a <= n; ++a)
        for (int p = 0; p <= pmax; ++p)
            for (int k = 0; k <= kmax; ++k)
                for (int m = 0; m <= k; ++m) {
                    DiffPoly lhs = alg_->dx(delta(a, p, k, m));
                    DiffPoly rhs = tau_flow(k).apply(tau_flow(m).apply(h(a, p)));
                    out.push_back(check_zero("delta-def[" + idx({a, p, k, m}) + "]", lhs - rhs));
                    out.push_back(check_zero("phi-tau[" + idx({a, p, k, m}) + "]",
                                             tau_flow(k).apply(phi(a, p, m)) - delta(a, p, k, m)));
                }
    return out;
}

std::vector<CheckResult> FrobeniusCover::check_principal_unit(int kmax) const { return supertau::check_principal_unit(*this, kmax); }

}  // namespace supertau
