#include "supertau/cover.hpp"

#include "supertau/errors.hpp"
#include "supertau/report.hpp"

namespace supertau {

RMatrix identity_matrix(int n) {
    RMatrix m(n + 1, std::vector<Rational>(n + 1));
    for (int i = 1; i <= n; ++i) m[i][i] = Rational(1);
    return m;
}

RMatrix matrix_product(const RMatrix& a, const RMatrix& b) {
    int n = static_cast<int>(a.size()) - 1;
    RMatrix r(n + 1, std::vector<Rational>(n + 1));
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (int j = 1; j <= n; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

bool matrix_is_zero(const RMatrix& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (!x.is_zero()) return false;
    return true;
}

RMatrix matrix_inverse(const RMatrix& a) {
    int n = static_cast<int>(a.size()) - 1;
    RMatrix m = a, inv = identity_matrix(n);
    for (int col = 1; col <= n; ++col) {
        int piv = -1;
        for (int r = col; r <= n; ++r)
            if (!m[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw NotInvertible("singular matrix");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Rational s = Rational(1) / m[col][col];
        for (int j = 1; j <= n; ++j) {
            m[col][j] *= s;
            inv[col][j] *= s;
        }
        for (int r = 1; r <= n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            Rational f = m[r][col];
            for (int j = 1; j <= n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

const Derivation& TauCover::t_flow(int beta, int q) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto& slot = t_flows_[{beta, q}];
    if (!slot) {
        Gen self = Gen::time(beta, q);
        auto rule = [this, beta, q, self](Gen g) -> DiffPoly {
            switch (g.kind()) {
                case Kind::EvenTime: return g == self ? DiffPoly(1) : DiffPoly();
                case Kind::OddTime: return DiffPoly();
                default: return t_image(beta, q, g);
            }
        };
        slot = std::make_unique<Derivation>(algebra(), 0, rule, "t" + std::to_string(beta) + "_" + std::to_string(q));
    }
    return *slot;
}

const Derivation& TauCover::tau_flow(int k) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto& slot = tau_flows_[k];
    if (!slot) {
        Gen self = Gen::otime(k);
        auto rule = [this, k, self](Gen g) -> DiffPoly {
            switch (g.kind()) {
                case Kind::OddTime: return g == self ? DiffPoly(1) : DiffPoly();
                case Kind::EvenTime: return DiffPoly();
                default: return tau_image(k, g);
            }
        };
        slot = std::make_unique<Derivation>(algebra(), 1, rule, "tau" + std::to_string(k));
    }
    return *slot;
}

std::vector<CheckResult> check_commutativity(const TauCover& cover, int pmax, int kmax) {
    int n = cover.n();
    std::vector<std::pair<std::string, const Derivation*>> flows;
    for (int b = 1; b <= n; ++b)
        for (int q = 0; q <= pmax; ++q) flows.push_back({"t" + std::to_string(b) + "," + std::to_string(q), &cover.t_flow(b, q)});
    for (int k = 0; k <= kmax; ++k) flows.push_back({"tau" + std::to_string(k), &cover.tau_flow(k)});
    std::vector<Gen> gens;
    for (int a = 1; a <= n; ++a) {
        gens.push_back(Gen::jet(a, 0));
        for (int k = 0; k <= kmax; ++k) gens.push_back(Gen::sigma(a, k));
        for (int p = 0; p <= pmax; ++p) gens.push_back(Gen::onepoint(a, p));
    }
    for (auto [a, p] : cover.resonant())
        if (p <= pmax)
            for (int k = 0; k <= kmax; ++k) gens.push_back(Gen::phi(a, p, k));
    std::vector<CheckResult> out;
    for (size_t i = 0; i < flows.size(); ++i)
        for (size_t j = i; j < flows.size(); ++j)
            for (Gen g : gens) {
                DiffPoly r = commutator(*flows[i].second, *flows[j].second, DiffPoly::gen(g));
                out.push_back(check_zero("commute[" + flows[i].first + "," + flows[j].first + "," + gen_name(g) + "]", r));
            }
    for (const auto& [name, d] : flows)
        for (auto& r : check_relations_preserved(cover, *d, kmax)) out.push_back(std::move(r));
    return out;
}

std::vector<CheckResult> check_relations_preserved(const TauCover& cover, const Derivation& d, int kmax) {
    std::vector<CheckResult> out;
    for (const auto& [g, expr] : cover.sigma_relations(kmax)) {
        DiffPoly r = cover.reduce(d.apply(DiffPoly::gen(g) - expr));
        out.push_back(check_zero("relation[" + d.name() + "," + gen_name(g) + "]", r));
    }
    return out;
}

DiffPoly substitute_odd(const DiffPoly& p, const std::function<const DiffPoly*(Gen)>& sub) {
    PolyBuilder out;
    for (const auto& t : p.terms()) {
        bool hit = false;
        for (uint64_t k : t.mono.odd)
            if (sub(Gen{k})) hit = true;
        if (!hit) {
            out.add(t.mono, t.coeff);
            continue;
        }
        Monomial head = t.mono;
        head.odd.clear();
        DiffPoly acc = DiffPoly::monomial(head, t.coeff);
        for (uint64_t k : t.mono.odd) {
            const DiffPoly* s = sub(Gen{k});
            acc = acc * (s ? *s : DiffPoly::gen(Gen{k}));
        }
        out.add(acc);
    }
    return out.finish();
}

std::vector<CheckResult> check_principal_unit(const TauCover& cover, int kmax) {
    int n = cover.n();
    std::vector<CheckResult> out;
    const Derivation& t10 = cover.t_flow(1, 0);
    std::vector<DiffPoly> gens;
    for (int a = 1; a <= n; ++a) {
        gens.push_back(field(a));
        for (int k = 0; k <= kmax; ++k) {
            gens.push_back(sigma_poly(a, k));
            gens.push_back(DiffPoly::gen(Gen::onepoint(a, k)));
        }
    }
    for (const auto& x : gens)
        out.push_back(check_zero("unit-flow[" + x.to_string() + "]", t10.apply(x) - cover.algebra()->dx(x)));
    return out;
}

}  // namespace supertau
