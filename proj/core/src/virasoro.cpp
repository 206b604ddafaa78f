#include "supertau/virasoro.hpp"

#include <set>

#include "supertau/errors.hpp"
#include "supertau/frobenius.hpp"
#include "supertau/kdv.hpp"

namespace supertau {

namespace {

using Row = std::vector<std::pair<TimeIndex, Rational>>;

DiffPoly t_of(TimeIndex x) { return DiffPoly::gen(Gen::time(x.first, x.second)); }
DiffPoly f_of(TimeIndex x) { return DiffPoly::gen(Gen::onepoint(x.first, x.second)); }

DiffPoly eps_power(int k) { return k == 0 ? DiffPoly(1) : DiffPoly::eps(k); }

std::string idx(TimeIndex x) { return std::to_string(x.first) + "," + std::to_string(x.second); }

RMatrix R_of(const FrobeniusSpec& s, int r) {
    if (r >= 1 && r <= static_cast<int>(s.R.size())) return s.R[r - 1];
    return RMatrix(s.n + 1, std::vector<Rational>(s.n + 1));
}

DiffPoly euler_residual(const FrobeniusCover& cover, const VirasoroCoefficients& v, TimeIndex x, TimeIndex y) {
    const auto& s = cover.spec();
    auto om = [&](TimeIndex p, TimeIndex q) { return cover.omega(p.first, p.second, q.first, q.second); };
    DiffPoly r = s.apply(s.euler_power(v.m + 1), om(x, y));
    for (const auto& [zw, a] : v.a) r -= (2 * a) * om(x, zw.first) * om(zw.second, y);
    for (const auto& [z, b] : v.b_row(x)) r -= b * om(z, y);
    for (const auto& [z, b] : v.b_row(y)) r -= b * om(z, x);
    return r;
}

std::set<Gen> gens_of(const DiffPoly& f, Kind kind) {
    std::set<Gen> out;
    f.any_gen([&](Gen g) {
        if (g.kind() == kind) out.insert(g);
        return false;
    });
    return out;
}

Rational odd_c0_for(int m, OddWeight w) { return w == OddWeight::Printed ? Rational(1) : Rational(m + 1); }

}  // namespace

Rational VirasoroCoefficients::b(TimeIndex lower, TimeIndex upper) const {
    for (const auto& [y, c] : b_row(lower))
        if (y == upper) return c;
    return Rational(0);
}

DiffPoly VirasoroCoefficients::odd_weight(int k) const {
    return DiffPoly(Rational(k) + odd_shift) + odd_c0 * DiffPoly::c0();
}

VirasoroCoefficients general_coefficients(const FrobeniusCover& cover, int m, OddWeight w) {
    if (m < -1 || m > 1) throw UnsupportedOrder("general Virasoro tables exist for m in {-1, 0, 1}, got " + std::to_string(m));
    const auto& s = cover.spec();
    const int n = s.n;
    const int rmax = static_cast<int>(s.R.size());
    VirasoroCoefficients v;
    v.m = m;
    v.n = n;
    v.odd_c0 = odd_c0_for(m, w);
    std::vector<Rational> mu = s.mu;
    std::vector<RMatrix> R;
    for (int r = 1; r <= rmax; ++r) R.push_back(s.R[r - 1]);

    if (m == -1) {
        v.b_row = [](TimeIndex x) {
            Row row;
            if (x.second >= 1) row.emplace_back(TimeIndex{x.first, x.second - 1}, Rational(1));
            return row;
        };
    } else if (m == 0) {
        v.b_row = [n, mu, R](TimeIndex x) {
            auto [beta, q] = x;
            Row row;
            row.emplace_back(x, Rational(2 * q + 1, 2) + mu[beta]);
            for (int r = 1; r <= q && r <= static_cast<int>(R.size()); ++r)
                for (int alpha = 1; alpha <= n; ++alpha)
                    if (!R[r - 1][alpha][beta].is_zero()) row.emplace_back(TimeIndex{alpha, q - r}, R[r - 1][alpha][beta]);
            return row;
        };
        Rational tr;
        for (int a = 1; a <= n; ++a) tr += Rational(1, 4) - mu[a] * mu[a];
        v.constant = tr * Rational(1, 4);
    } else {
        for (int r = 2; r <= 2 * rmax; ++r) {
            RMatrix acc(n + 1, std::vector<Rational>(n + 1));
            for (int i = 1; i < r; ++i) {
                RMatrix p = matrix_product(R_of(s, i), R_of(s, r - i));
                for (int a = 1; a <= n; ++a)
                    for (int b = 1; b <= n; ++b) acc[a][b] += p[a][b];
            }
            if (!matrix_is_zero(acc))
                throw UnsupportedOrder("L_1 with nonzero R_{r,2} is not supported (r = " + std::to_string(r) + ")");
        }
        v.b_row = [n, mu, R](TimeIndex x) {
            auto [beta, q] = x;
            Row row;
            row.emplace_back(TimeIndex{beta, q + 1},
                             (Rational(2 * q + 1, 2) + mu[beta]) * (Rational(2 * q + 3, 2) + mu[beta]));
            for (int r = 1; r <= q + 1 && r <= static_cast<int>(R.size()); ++r)
                for (int alpha = 1; alpha <= n; ++alpha)
                    if (!R[r - 1][alpha][beta].is_zero())
                        row.emplace_back(TimeIndex{alpha, q - r + 1},
                                         R[r - 1][alpha][beta] * (Rational(2 * q + 2) + 2 * mu[beta]));
            return row;
        };
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                Rational val = Rational(1, 2) * s.eta_inv[a][b] * (Rational(1, 2) + mu[a]) * (Rational(1, 2) + mu[b]);
                if (!val.is_zero()) v.a[{{a, 0}, {b, 0}}] = val;
            }
    }

    for (int tot = 0; tot <= m + 4; ++tot)
        for (int p = 0; p <= tot; ++p)
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    Rational c = euler_residual(cover, v, {a, p}, {b, tot - p}).constant_term() * Rational(1, 2);
                    if (!c.is_zero()) v.c[{{a, p}, {b, tot - p}}] = c;
                }
    return v;
}

VirasoroCoefficients kdv_coefficients(int m, bool dispersive, OddWeight w) {
    if (m < -1) throw UnsupportedOrder("Virasoro operators start at m = -1");
    VirasoroCoefficients v;
    v.m = m;
    v.n = 1;
    v.odd_c0 = odd_c0_for(m, w);
    if (m == -1) {
        v.b_row = [](TimeIndex x) {
            Row row;
            if (x.second >= 1) row.emplace_back(TimeIndex{1, x.second - 1}, Rational(1));
            return row;
        };
        v.c[{{1, 0}, {1, 0}}] = Rational(1, 2);
        if (dispersive) v.c_eps = -2;
        return v;
    }
    v.b_row = [m](TimeIndex x) {
        return Row{{TimeIndex{1, x.second + m}, half_gamma_ratio(x.second + m + 1, x.second)}};
    };
    for (int k = 0; k <= m - 1; ++k)
        v.a[{{1, k}, {1, m - 1 - k}}] = Rational(1, 2) * half_gamma_ratio(k + 1, 0) * half_gamma_ratio(m - k, 0);
    if (dispersive) v.a_eps = 2;
    if (m == 0) v.constant = Rational(1, 16);
    return v;
}

nlohmann::json coefficients_to_json(const VirasoroCoefficients& v, int level_max) {
    nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array(), c = nlohmann::json::array();
    for (const auto& [xy, val] : v.a)
        a.push_back({xy.first.first, xy.first.second, xy.second.first, xy.second.second, val.to_string()});
    for (int p = 0; p <= level_max; ++p)
        for (int al = 1; al <= v.n; ++al)
            for (const auto& [y, val] : v.b_row({al, p})) b.push_back({al, p, y.first, y.second, val.to_string()});
    for (const auto& [xy, val] : v.c)
        c.push_back({xy.first.first, xy.first.second, xy.second.first, xy.second.second, val.to_string()});
    return {{"m", v.m}, {"a", a}, {"b", b}, {"c", c}, {"constant", v.constant.to_string()},
            {"a_eps", v.a_eps}, {"c_eps", v.c_eps}};
}

std::vector<CheckResult> check_euler_identity(const FrobeniusCover& cover, const VirasoroCoefficients& v, int pmax) {
    std::vector<CheckResult> out;
    const int n = cover.n();
    for (int p = 0; p <= pmax; ++p)
        for (int q = p; q <= pmax; ++q)
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    if (p == q && b < a) continue;
                    TimeIndex x{a, p}, y{b, q};
                    DiffPoly r = euler_residual(cover, v, x, y);
                    auto it = v.c.find({x, y});
                    if (it != v.c.end()) r -= 2 * it->second;
                    out.push_back(check_zero("euler-omega[m=" + std::to_string(v.m) + ";" + idx(x) + ";" + idx(y) + "]", r));
                }
    return out;
}

DiffPoly apply_virasoro_operator(const VirasoroCoefficients& v, const DiffPoly& f) {
    DiffPoly out = v.constant * f;
    std::set<Gen> times = gens_of(f, Kind::EvenTime);
    auto has = [&](TimeIndex x) { return times.count(Gen::time(x.first, x.second)) > 0; };
    DiffPoly ea = eps_power(v.a_eps), ec = eps_power(v.c_eps);
    for (const auto& [xy, a] : v.a) {
        if (!has(xy.first) || !has(xy.second)) continue;
        DiffPoly d = partial(partial(f, Gen::time(xy.second.first, xy.second.second)), Gen::time(xy.first.first, xy.first.second));
        out += a * ea * d;
    }
    for (Gen y : times) {
        DiffPoly dy = partial(f, y);
        // b^Y_X connects lower level q to upper levels q - 1 .. q + m.
        int top = y.level() + 1;
        for (int q = 0; q <= top; ++q)
            for (int al = 1; al <= v.n; ++al) {
                Rational b = v.b({al, q}, {y.alpha(), y.level()});
                if (!b.is_zero()) out += b * t_of({al, q}) * dy;
            }
    }
    for (const auto& [xy, c] : v.c) out += c * ec * t_of(xy.first) * t_of(xy.second) * f;
    for (Gen g : gens_of(f, Kind::OddTime)) {
        int k = g.level() - v.m;
        if (k < 0) continue;
        out += v.odd_weight(k) * DiffPoly::gen(Gen::otime(k)) * partial(f, g);
    }
    return out;
}

std::vector<CheckResult> check_virasoro_algebra(const std::function<VirasoroCoefficients(int)>& table,
                                                const std::vector<int>& ms, int n, int P, int K) {
    std::map<int, VirasoroCoefficients> L;
    auto get = [&](int m) -> const VirasoroCoefficients& {
        auto it = L.find(m);
        if (it == L.end()) it = L.emplace(m, table(m)).first;
        return it->second;
    };
    std::vector<DiffPoly> basis{DiffPoly(1)};
    std::vector<DiffPoly> deg1;
    for (int p = 0; p <= P; ++p)
        for (int a = 1; a <= n; ++a) deg1.push_back(t_of({a, p}));
    for (int k = 0; k <= K; ++k) deg1.push_back(DiffPoly::gen(Gen::otime(k)));
    for (size_t i = 0; i < deg1.size(); ++i) {
        basis.push_back(deg1[i]);
        for (size_t j = i; j < deg1.size(); ++j) {
            DiffPoly pr = deg1[i] * deg1[j];
            if (!pr.is_zero()) basis.push_back(pr);
        }
    }
    std::vector<CheckResult> out;
    for (size_t i = 0; i < ms.size(); ++i)
        for (size_t j = i + 1; j < ms.size(); ++j) {
            int m = ms[i], k = ms[j];
            if (m == k) continue;
            const auto& lm = get(m);
            const auto& lk = get(k);
            const auto& lmk = get(m + k);
            CheckResult r{"virasoro-algebra[" + std::to_string(m) + "," + std::to_string(k) + "]", true, {}, {}};
            for (const auto& f : basis) {
                DiffPoly res = apply_virasoro_operator(lm, apply_virasoro_operator(lk, f)) -
                               apply_virasoro_operator(lk, apply_virasoro_operator(lm, f)) -
                               Rational(m - k) * apply_virasoro_operator(lmk, f);
                if (!res.is_zero()) {
                    r.pass = false;
                    r.residue = res;
                    r.note = "on " + f.to_string();
                    break;
                }
            }
            out.push_back(std::move(r));
        }
    return out;
}

VirasoroFlow::VirasoroFlow(const TauCover& cover, VirasoroCoefficients coeffs, int P, int K, DiffPoly genus)
    : cover_(cover), coeffs_(std::move(coeffs)), P_(P), K_(K), genus_(std::move(genus)) {
    d_ = std::make_unique<Derivation>(
        cover_.algebra(), 0, [this](Gen g) { return rule(g); }, "s" + std::to_string(coeffs_.m));
}

DiffPoly VirasoroFlow::f_image(int alpha, int p) const { return d_->image(Gen::onepoint(alpha, p)); }

DiffPoly VirasoroFlow::even_part(int alpha, int p) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = even_.find({alpha, p});
    if (it != even_.end()) return it->second;
    const TimeIndex x{alpha, p};
    auto om = [&](TimeIndex a, TimeIndex b) { return cover_.omega(a.first, a.second, b.first, b.second); };
    DiffPoly r;
    for (const auto& [zw, a] : coeffs_.a) {
        const auto& [z, w] = zw;
        if (!genus_.is_zero()) r += a * genus_ * cover_.t_flow(w.first, w.second).apply(om(x, z));
        r += (2 * a) * om(x, z) * f_of(w);
    }
    for (const auto& [y, b] : coeffs_.b_row(x)) r += b * f_of(y);
    for (int q = 0; q <= P_; ++q)
        for (int be = 1; be <= coeffs_.n; ++be) {
            TimeIndex z{be, q};
            DiffPoly tz;
            for (const auto& [y, b] : coeffs_.b_row(z)) tz += b * om(x, y);
            auto c1 = coeffs_.c.find({x, z});
            if (c1 != coeffs_.c.end()) tz += c1->second;
            auto c2 = coeffs_.c.find({z, x});
            if (c2 != coeffs_.c.end()) tz += c2->second;
            if (!tz.is_zero()) r += t_of(z) * tz;
        }
    return even_.emplace(std::make_pair(alpha, p), r).first->second;
}


DiffPoly VirasoroFlow::tau_part(int alpha, int p, int j) const {
    const Derivation& tj = cover_.tau_flow(j);
    const int m = coeffs_.m;
    DiffPoly r = tj.apply(even_part(alpha, p));
    if (j + m >= 0) r += coeffs_.odd_weight(j) * cover_.phi(alpha, p, j + m);
    for (int k = 0; k <= K_; ++k) {
        if (k + m < 0) continue;
        r -= coeffs_.odd_weight(k) * DiffPoly::gen(Gen::otime(k)) * tj.apply(cover_.phi(alpha, p, k + m));
    }
    return r;
}

DiffPoly VirasoroFlow::rule(Gen g) const {
    const int m = coeffs_.m;
    switch (g.kind()) {
        case Kind::EvenTime:
        case Kind::OddTime: return DiffPoly();
        case Kind::OnePoint: {
            DiffPoly r = even_part(g.alpha(), g.level());
            for (int k = 0; k <= K_; ++k) {
                if (k + m < 0) continue;
                r += coeffs_.odd_weight(k) * DiffPoly::gen(Gen::otime(k)) * cover_.phi(g.alpha(), g.level(), k + m);
            }
            return r;
        }
        case Kind::EvenJet: {
            DiffPoly r;
            const auto& ei = cover_.eta_inv();
            const Derivation& t10 = cover_.t_flow(1, 0);
            for (int b = 1; b <= cover_.n(); ++b)
                if (!ei[g.alpha()][b].is_zero()) r += ei[g.alpha()][b] * t10.apply(f_image(b, 0));
            return r;
        }
        case Kind::OddSigma: return tau_part(g.alpha(), 0, g.level());
        case Kind::PhiGen: return tau_part(g.alpha(), g.level(), g.phi_n());
        default: throw AlgebraError("no Virasoro image for " + gen_name(g));
    }
}

namespace {

std::vector<Gen> symmetry_generators(const TauCover& cover, SymmetryBounds bounds) {
    std::vector<Gen> gens;
    const int n = cover.n();
    for (int a = 1; a <= n; ++a) gens.push_back(Gen::jet(a, 0));
    for (int k = 0; k <= bounds.kmax; ++k)
        for (int a = 1; a <= n; ++a) gens.push_back(Gen::sigma(a, k));
    for (int p = 0; p <= bounds.pmax; ++p)
        for (int a = 1; a <= n; ++a) gens.push_back(Gen::onepoint(a, p));
    for (auto [a, p] : cover.resonant())
        if (p <= bounds.pmax)
            for (int k = 0; k <= bounds.kmax; ++k) gens.push_back(Gen::phi(a, p, k));
    return gens;
}

const VirasoroFlow& bounded_flow(const std::map<int, const VirasoroFlow*>& flows, int m, SymmetryBounds bounds) {
    auto it = flows.find(m);
    if (it == flows.end()) throw UnsupportedOrder("no Virasoro flow for m = " + std::to_string(m));
    const VirasoroFlow& f = *it->second;
    if (f.P() < bounds.pmax || f.K() < bounds.kmax)
        throw TruncationTooSmall("Virasoro truncation (" + std::to_string(f.P()) + "," + std::to_string(f.K()) +
                                 ") is below the checked indices");
    return f;
}

}  // namespace

std::vector<CheckResult> check_symmetry_flows(const TauCover& cover, const VirasoroFlow& flow, SymmetryBounds bounds) {
    bounded_flow({{flow.m(), &flow}}, flow.m(), bounds);
    const std::vector<Gen> gens = symmetry_generators(cover, bounds);
    const Derivation& s = flow.derivation();
    const std::string sm = "s" + std::to_string(flow.m());
    std::vector<CheckResult> out;
    for (int q = 0; q <= bounds.pmax; ++q)
        for (int b = 1; b <= cover.n(); ++b) {
            const Derivation& t = cover.t_flow(b, q);
            for (Gen g : gens)
                out.push_back(check_zero("commute[" + sm + ",t" + std::to_string(b) + "," + std::to_string(q) + "," +
                                             gen_name(g) + "]",
                                         cover.reduce(commutator(s, t, DiffPoly::gen(g)))));
        }
    for (int k = 0; k <= bounds.kmax; ++k) {
        const Derivation& t = cover.tau_flow(k);
        for (Gen g : gens)
            out.push_back(check_zero("commute[" + sm + ",tau" + std::to_string(k) + "," + gen_name(g) + "]",
                                     cover.reduce(commutator(s, t, DiffPoly::gen(g)))));
    }
    for (auto& r : check_relations_preserved(cover, s, bounds.kmax + 1)) out.push_back(std::move(r));
    return out;
}

std::vector<CheckResult> check_symmetry_bracket(const TauCover& cover, const std::map<int, const VirasoroFlow*>& flows,
                                                int a, int b, SymmetryBounds bounds) {
    const Derivation& sa = bounded_flow(flows, a, bounds).derivation();
    const Derivation& sb = bounded_flow(flows, b, bounds).derivation();
    const Derivation& sab = bounded_flow(flows, a + b, bounds).derivation();
    std::vector<CheckResult> out;
    for (Gen g : symmetry_generators(cover, bounds)) {
        DiffPoly x = DiffPoly::gen(g);
        DiffPoly r = cover.reduce(commutator(sa, sb, x) - Rational(b - a) * sab.apply(x));
        out.push_back(check_zero("virasoro[s" + std::to_string(a) + ",s" + std::to_string(b) + "," + gen_name(g) + "]", r));
    }
    return out;
}

std::vector<CheckResult> check_symmetry_commutation(const TauCover& cover,
                                                    const std::map<int, const VirasoroFlow*>& flows,
                                                    const std::vector<int>& ms, SymmetryBounds bounds) {
    std::vector<CheckResult> out;
    for (int m : ms)
        for (auto& r : check_symmetry_flows(cover, bounded_flow(flows, m, bounds), bounds)) out.push_back(std::move(r));
    for (size_t i = 0; i < ms.size(); ++i)
        for (size_t j = i + 1; j < ms.size(); ++j) {
            if (ms[i] == ms[j]) continue;
            for (auto& r : check_symmetry_bracket(cover, flows, ms[i], ms[j], bounds)) out.push_back(std::move(r));
        }
    return out;
}

std::vector<CheckResult> check_ab_identity(const FrobeniusCover& cover, const VirasoroCoefficients& v) {
    const int m = v.m;
    if (m < -1 || m > 1) throw UnsupportedOrder("the A = B identity is checked for m in {-1, 0, 1}");
    const auto& s = cover.spec();
    const Algebra& alg = *cover.algebra();
    const int n = s.n;
    auto om = [&](TimeIndex a, TimeIndex b) { return cover.omega(a.first, a.second, b.first, b.second); };
    auto phi = [&](TimeIndex a, int k) { return cover.phi(a.first, a.second, k); };
    const Derivation& tau0 = cover.tau_flow(0);
    const Derivation& tau1 = cover.tau_flow(1);
    const VectorField em = s.euler_power(m + 1);
    const TimeIndex unit{1, 0};

    std::vector<CheckResult> out;
    for (int lam = 1; lam <= n; ++lam) {
        const TimeIndex l0{lam, 0};
        DiffPoly A;
        for (const auto& [xy, a] : v.a) {
            const auto& [x, y] = xy;
            A += (2 * a) * (tau1.apply(om(x, l0)) * phi(y, 0) - tau0.apply(om(x, l0)) * phi(y, 1) +
                            om(x, l0) * cover.delta(y.first, y.second, 1, 0));
        }
        for (const auto& [x, b] : v.b_row(l0)) A += b * cover.delta(x.first, x.second, 1, 0);
        A += cover.delta(lam, 0, m + 1, 0);

        DiffPoly B;
        for (int de = 1; de <= n; ++de)
            for (int mu = 1; mu <= n; ++mu) {
                const DiffPoly& gam = s.gamma[de][mu][lam];
                if (gam.is_zero()) continue;
                const TimeIndex d0{de, 0}, m0{mu, 0};
                DiffPoly th1 = alg.nf_sigma(de, 0, 1);
                DiffPoly sg = sigma_poly(mu, 0);
                B += s.apply(em, gam) * sg * th1;
                DiffPoly first;
                for (const auto& [x, b] : v.b_row(m0)) first += b * phi(x, 0);
                for (const auto& [xy, a] : v.a) first += (2 * a) * om(xy.first, m0) * phi(xy.second, 0);
                DiffPoly second;
                for (const auto& [x, b] : v.b_row(d0)) second += b * alg.dx(phi(x, 0));
                for (const auto& [x, b] : v.b_row(unit))
                    second += b * cover.t_flow(x.first, x.second).apply(sigma_poly(de, 0));
                for (const auto& [xy, a] : v.a) {
                    const auto& [x, y] = xy;
                    second += (2 * a) * (alg.dx(om(x, d0)) * phi(y, 0) + om(x, d0) * tau0.apply(om(y, unit)) +
                                         tau0.apply(om(x, d0)) * om(y, unit));
                }
                B += gam * (first * th1 + sg * second);
            }
        out.push_back(check_zero("a-equals-b[m=" + std::to_string(m) + ";lambda=" + std::to_string(lam) + "]", cover.reduce(A - B)));
    }
    return out;
}

}  // namespace supertau
