#include "supertau/kdv.hpp"

#include "supertau/antiderivative.hpp"
#include "supertau/errors.hpp"
#include "supertau/frobenius.hpp"
#include "supertau/variational.hpp"

namespace supertau {

namespace {

const DiffPoly& eps2() {
    static const DiffPoly e = DiffPoly::eps(2);
    return e;
}

DiffPoly sg(int k) { return DiffPoly::gen(Gen::sigma(1, k)); }

std::string idx2(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

// First nonzero coefficient of s at exponents hi..lo, or a pass.
CheckResult series_zero(const std::string& id, const LaurentJet& s, int hi, int lo) {
    for (int e = hi; e >= lo; --e) {
        DiffPoly v;
        try {
            v = s.at({e});
        } catch (const WindowError&) {
            throw TruncationTooSmall(id + ": window too small at exponent " + std::to_string(e));
        }
        if (!v.is_zero()) return CheckResult{id, false, v, "coefficient of exponent " + std::to_string(e)};
    }
    return CheckResult{id, true, {}, {}};
}

CheckResult bi_zero(const std::string& id, const BiSeries& s, int lhi, int llo, int mhi, int mlo) {
    for (int a = lhi; a >= llo; --a)
        for (int b = mhi; b >= mlo; --b) {
            DiffPoly v;
            try {
                v = s(a, b);
            } catch (const WindowError&) {
                throw TruncationTooSmall(id + ": window too small at " + idx2(a, b));
            }
            if (!v.is_zero()) return CheckResult{id, false, v, "coefficient of exponents " + idx2(a, b)};
        }
    return CheckResult{id, true, {}, {}};
}

}  // namespace

Rational half_gamma_ratio(int a, int b) {
    if (a < b) return Rational(1) / half_gamma_ratio(b, a);
    Rational r(1);
    for (int j = b; j < a; ++j) r *= Rational(2 * j + 1, 2);
    return r;
}

DiffPoly kdv_p1(const Algebra& alg, const DiffPoly& f) {
    DiffPoly d1 = alg.dx(f);
    DiffPoly d3 = alg.dx(alg.dx(d1));
    return kdv_u() * d1 + Rational(1, 2) * kdv_u(1) * f + Rational(1, 8) * eps2() * d3;
}

KdvCover::KdvCover() : alg_(std::make_shared<Algebra>(1)), eta_(identity_matrix(1)) {
    alg_->set_sigma_rule([](const Algebra& a, int, int k) {
        return kdv_u() * a.nf_sigma(1, k - 1, 1) + Rational(1, 2) * kdv_u(1) * sg(k - 1) +
               Rational(1, 8) * eps2() * a.nf_sigma(1, k - 1, 3);
    });
    alg_->set_onepoint_rule([this](const Algebra&, Gen g) { return R(g.level() + 1); });
}

DiffPoly KdvCover::R(int n) const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    if (R_.empty()) R_.push_back(DiffPoly(1));
    while (static_cast<int>(R_.size()) <= n) {
        int k = static_cast<int>(R_.size()) - 1;
        R_.push_back(antiderivative(kdv_p1(*alg_, R_[k])) * (Rational(2) / Rational(2 * k + 1)));
    }
    return R_[n];
}

DiffPoly KdvCover::h(int, int p) const { return R(p + 1); }

DiffPoly KdvCover::omega(int, int k, int, int n) const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    auto it = omega_.find({k, n});
    if (it != omega_.end()) return it->second;
    DiffPoly r = antiderivative(t_flow(1, n).apply(R(k + 1)));
    omega_.emplace(std::make_pair(k, n), r);
    return r;
}

DiffPoly KdvCover::phi(int, int k, int n) const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    auto it = phi_.find({k, n});
    if (it != phi_.end()) return it->second;
    // tau_n R_{k+1} = t_k sigma_n = 1/2 sum_i g_i (2 R sigma' - (R sigma)')
    DiffPoly r;
    for (int i = 0; i <= k; ++i) {
        Rational g = half_gamma_ratio(k - i, k + 1) * Rational(1, 2);
        r += g * (2 * antiderivative_R_dsigma(k - i, n + i) - R(k - i) * sg(n + i));
    }
    phi_.emplace(std::make_pair(k, n), r);
    return r;
}

LaurentJet KdvCover::b_hat(int terms) const {
    std::vector<DiffPoly> cs;
    for (int n = 0; n < terms; ++n) cs.push_back(half_gamma_ratio(n, 0) * R(n));
    return laurent(0, cs, true);
}

LaurentJet KdvCover::c_series(int terms) const {
    std::vector<DiffPoly> cs;
    for (int n = 0; n < terms; ++n) cs.push_back(-sg(n));
    return laurent(-1, cs);
}

LaurentJet KdvCover::B(int n) const {
    LaurentJet b({false}, {LaurentJet::kNegInf}, {n});
    for (int i = 0; i <= n; ++i) b.set({i}, half_gamma_ratio(n - i, n + 1) * R(n - i));
    return b;
}

LaurentJet KdvCover::C(int m, int terms) const { return c_series(terms + m).shifted(0, m).minus(0); }

std::map<std::pair<int, int>, DiffPoly> KdvCover::closed_form_antiderivatives(int jmax, int mmax) const {
    // b^(mu) c(lambda)' = [((c/b^ - eps^2/8 b^ (b^ (c/b^)')')/(mu - lambda))']_{lambda/mu, lambda-}
    const Algebra& alg = *alg_;
    auto dx = [&](const DiffPoly& p) { return alg.dx(p); };
    LaurentJet bh = b_hat(jmax + 3);
    BiSeries cb = bi_from_lambda(c_series(mmax + jmax + 5));
    BiSeries bb = bi_from_mu(bh);
    BiSeries q = cb * bi_from_mu(inverse(bh));
    BiSeries inner = q - (Rational(1, 8) * eps2()) * (bb * (bb * q.map(dx)).map(dx));
    BiSeries x = (inner * bi_geometric(-jmax - 3)).minus(0);
    std::map<std::pair<int, int>, DiffPoly> out;
    for (int j = 0; j <= jmax; ++j)
        for (int m = 0; m <= mmax; ++m) {
            DiffPoly w;
            try {
                w = x(-m - 1, -j);
            } catch (const WindowError&) {
                throw TruncationTooSmall("series window too small for the antiderivative of R_" + std::to_string(j) +
                                         " sigma_" + std::to_string(m) + "'");
            }
            out.emplace(std::make_pair(j, m), w * (Rational(-1) / half_gamma_ratio(j, 0)));
        }
    return out;
}

DiffPoly KdvCover::antiderivative_R_dsigma(int j, int m) const {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    auto it = anti_.find({j, m});
    if (it != anti_.end()) return it->second;
    const Algebra& alg = *alg_;
    DiffPoly a;
    if (j == 0) {
        a = sg(m);
    } else {
        DiffPoly r = R(j - 1);
        DiffPoly r1 = alg.dx(r);
        DiffPoly b = kdv_u() * r * sg(m) +
                     (Rational(1, 8) * eps2()) * (r * alg.nf_sigma(1, m, 2) - r1 * alg.nf_sigma(1, m, 1) + alg.dx(r1) * sg(m));
        Rational w(2 * j - 1, 2);
        a = (antiderivative_R_dsigma(j - 1, m + 1) - b + w * R(j) * sg(m)) * (Rational(1) / w);
    }
    if (alg.dx(a) != R(j) * alg.nf_sigma(1, m, 1))
        throw NotATotalDerivative("antiderivative failed for R_" + std::to_string(j) + " sigma_" + std::to_string(m) + "'");
    return anti_.emplace(std::make_pair(j, m), a).first->second;
}

DiffPoly KdvCover::t_image(int, int n, Gen g) const {
    const Algebra& alg = *alg_;
    switch (g.kind()) {
        case Kind::EvenJet: return alg.dx(R(n + 1));
        case Kind::OddSigma: {
            int k = g.level();
            DiffPoly r;
            for (int i = 0; i <= n; ++i) {
                Rational w = half_gamma_ratio(n - i, n + 1) * Rational(1, 2);
                DiffPoly rr = R(n - i);
                r += w * (rr * alg.nf_sigma(1, k + i, 1) - alg.dx(rr) * sg(k + i));
            }
            return r;
        }
        case Kind::OnePoint: return omega(1, g.level(), 1, n);
        default: throw AlgebraError("no t-flow image for " + gen_name(g));
    }
}

DiffPoly KdvCover::tau_image(int n, Gen g) const {
    const Algebra& alg = *alg_;
    switch (g.kind()) {
        case Kind::EvenJet: return alg.nf_sigma(1, n, 1);
        case Kind::OddSigma: {
            int k = g.level();
            if (k == n) return DiffPoly();
            int lo = std::min(k, n), hi = std::max(k, n);
            DiffPoly r;
            for (int i = 0; i <= hi - lo - 1; ++i) r += sg(i + lo) * alg.nf_sigma(1, hi - i - 1, 1);
            r *= Rational(1, 2);
            return k < n ? r : -r;
        }
        case Kind::OnePoint: return phi(1, g.level(), n);
        default: throw AlgebraError("no tau-flow image for " + gen_name(g));
    }
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> KdvCover::check_recursion(int nmax) const {
    std::vector<CheckResult> out;
    out.push_back(check_zero("R0", R(0) - DiffPoly(1)));
    for (int n = 0; n < nmax; ++n) {
        DiffPoly r = Rational(2 * n + 1, 2) * alg_->dx(R(n + 1)) - kdv_p1(*alg_, R(n));
        out.push_back(check_zero("gd-recursion[" + std::to_string(n) + "]", r));
    }
    return out;
}

std::vector<CheckResult> KdvCover::check_generating_identities(int window) const {
    const Algebra& alg = *alg_;
    auto dx = [&](const DiffPoly& p) { return alg.dx(p); };
    int w = window;
    std::vector<CheckResult> out;

    LaurentJet c = c_series(w + 2);
    LaurentJet dc = c.map(dx);
    {
        LaurentJet p = c.map([&](const DiffPoly& f) { return kdv_p1(alg, f); }) - dc.shifted(0, 1);
        out.push_back(series_zero("c-equation", p - LaurentJet::constant(alg.nf_sigma(1, 0, 1)), 0, -w));
    }
    {
        const Derivation& t0 = tau_flow(0);
        LaurentJet r = c.map([&](const DiffPoly& f) { return t0.apply(f); }) - (c * dc) * Rational(1, 2);
        out.push_back(series_zero("tau0-on-c", r, -1, -w));
    }
    for (int n = 0; n <= w; ++n) {
        DiffPoly r = tau_flow(n).apply(sg(0));
        for (int i = 0; i <= n - 1; ++i) r -= Rational(1, 2) * sg(i) * alg.nf_sigma(1, n - i - 1, 1);
        out.push_back(check_zero("tau-on-theta[" + std::to_string(n) + "]", r));
    }
    for (int n = 0; n <= w; ++n) {
        LaurentJet cc = c_series(w + n + 3);
        LaurentJet dcc = cc.map(dx);
        LaurentJet cn = cc.shifted(0, n).minus(0);
        const Derivation& tn = tau_flow(n);
        LaurentJet rhs = (cn * dcc + cc * cn.map(dx) - (cc * dcc).shifted(0, n).minus(0)) * Rational(1, 2);
        LaurentJet r = cc.map([&](const DiffPoly& f) { return tn.apply(f); }) - rhs;
        out.push_back(series_zero("tau-on-c[" + std::to_string(n) + "]", r, -1, -w));
    }
    {
        // Geometric terms up to lambda^{w+1} leave lambda exact down to -w-3.
        LaurentJet cc = c_series(2 * w + 4);
        BiSeries lhs({false, false}, {-w - 1, -w - 1}, {-1, -1});
        for (int n = 0; n <= w; ++n) {
            const Derivation& tn = tau_flow(n);
            for (int m = 0; m <= w; ++m) lhs.set({-m - 1, -n - 1}, -tn.apply(sg(m)));
        }
        BiSeries cl = bi_from_lambda(cc), cm = bi_from_mu(cc);
        BiSeries dcl = cl.map(dx), dcm = cm.map(dx);
        BiSeries num = cl * dcl + cm * dcm - cm * dcl - cl * dcm;
        BiSeries rhs = (num * bi_geometric(-w - 2)) * Rational(1, 2);
        out.push_back(bi_zero("tau-on-c-bivariate", lhs - rhs, -1, -w, -1, -w));
    }
    LaurentJet bh = b_hat(w + 2);
    {
        LaurentJet d1 = bh.map(dx), d2 = d1.map(dx);
        LaurentJet sq = bh * bh;
        LaurentJet r = kdv_u() * sq - sq.shifted(0, 1) + (Rational(1, 8) * eps2()) * ((bh * d2) * Rational(2) - d1 * d1) +
                       LaurentJet::constant(DiffPoly(1));
        out.push_back(series_zero("b-equation", r, 0, -w));
    }
    {
        int terms = w;
        LaurentJet b2 = b_hat(terms);
        BiSeries cl = bi_from_lambda(c_series(2 * terms + 2));
        BiSeries dcl = cl.map(dx);
        BiSeries bb = bi_from_mu(b2), dbb = bb.map(dx), ddbb = dbb.map(dx);
        LaurentJet ib = inverse(b2);
        BiSeries ib2 = bi_from_mu(ib * ib);
        BiSeries lhs = bb * dcl;
        BiSeries y = (bb * dcl - cl * dbb) * bi_geometric(-terms - 1);
        BiSeries dy = y.map(dx), ddy = dy.map(dx);
        BiSeries dop = bb * bb * ddy - bb * dbb * dy + (dbb * dbb - bb * ddbb) * y;
        BiSeries rhs = (ib2 * y - (Rational(1, 8) * eps2()) * (ib2 * dop)).minus(0);
        out.push_back(bi_zero("bc-derivative", lhs - rhs, -1, -w, 0, -w + 1));

        BiSeries q = cl * bi_from_mu(ib);
        BiSeries inner = q - (Rational(1, 8) * eps2()) * (bb * (bb * q.map(dx)).map(dx));
        BiSeries tform = (inner * bi_geometric(-terms - 1)).minus(0).map(dx);
        out.push_back(bi_zero("total-derivative-form", lhs - tform, -1, -w, 0, -w + 1));

        BiSeries ct({false, true}, {-terms, -terms}, {-1, -1});
        for (int n = 0; n < terms; ++n) {
            const Derivation& tn = t_flow(1, n);
            for (int m = 0; m < terms; ++m) ct.set({-m - 1, -n - 1}, half_gamma_ratio(n + 1, 0) * -tn.apply(sg(m)));
        }
        BiSeries ctr = ((bb * dcl - cl * dbb) * bi_geometric(-terms - 1) * Rational(1, 2)).minus(0);
        out.push_back(bi_zero("t-on-c-bivariate", ct - ctr, -1, -w, -1, -w));
    }
    return out;
}

std::vector<CheckResult> KdvCover::check_zero_curvature(int nmax, int mmax, int window) const {
    const Algebra& alg = *alg_;
    auto dx = [&](const DiffPoly& p) { return alg.dx(p); };
    std::vector<CheckResult> out;
    for (int n = 0; n <= nmax; ++n) {
        LaurentJet bn = B(n);
        LaurentJet bh = b_hat(n + 2);
        LaurentJet lifted({false}, {LaurentJet::kNegInf}, {n});
        for (int j = 0; j <= n; ++j) lifted.set({n - j}, bh.at({-j}));
        out.push_back(series_zero("b-series[" + std::to_string(n) + "]", lifted * half_gamma_ratio(0, n + 1) - bn, n, 0));
        const Derivation& tn = t_flow(1, n);
        LaurentJet dbn = bn.map(dx);
        for (int m = 0; m <= mmax; ++m) {
            const Derivation& tm = tau_flow(m);
            LaurentJet cm = C(m, window + n + 2);
            LaurentJet dcm = cm.map(dx);
            LaurentJet comm = (bn * dcm - cm * dbn) * Rational(1, 2);
            LaurentJet lhs = cm.map([&](const DiffPoly& f) { return tn.apply(f); }) -
                             bn.map([&](const DiffPoly& f) { return tm.apply(f); });
            out.push_back(series_zero("zero-curvature[" + idx2(n, m) + "]", lhs - comm, n - 1, -window));
            DiffPoly res = comm.at({-1});
            out.push_back(check_zero("residue[" + idx2(n, m) + "]", tn.apply(sg(m)) + res));
        }
    }
    return out;
}

std::vector<CheckResult> KdvCover::check_omega_phi(int kmax, int nmax) const {
    std::vector<CheckResult> out;
    for (int k = 0; k <= kmax; ++k)
        for (int n = 0; n <= nmax; ++n) {
            std::string id = "[" + idx2(k, n) + "]";
            out.push_back(check_zero("omega-def" + id, alg_->dx(omega(1, k, 1, n)) - t_flow(1, n).apply(R(k + 1))));
            out.push_back(check_zero("omega-sym" + id, omega(1, k, 1, n) - omega(1, n, 1, k)));
            out.push_back(check_zero("phi-def" + id, alg_->dx(phi(1, k, n)) - tau_flow(n).apply(R(k + 1))));
        }
    for (const auto& [jm, a] : closed_form_antiderivatives(kmax, kmax + nmax))
        out.push_back(check_zero("antiderivative-closed-form[" + idx2(jm.first, jm.second) + "]",
                                 a - antiderivative_R_dsigma(jm.first, jm.second)));
    return out;
}

std::vector<CheckResult> KdvCover::check_dispersionless(const FrobeniusCover& onedim, int pmax, int kmax) const {
    std::vector<CheckResult> out;
    std::vector<Gen> gens{Gen::jet(1, 0)};
    for (int k = 0; k <= kmax; ++k) gens.push_back(Gen::sigma(1, k));
    for (int p = 0; p <= pmax; ++p) gens.push_back(Gen::onepoint(1, p));
    for (Gen g : gens) {
        DiffPoly x = DiffPoly::gen(g);
        out.push_back(check_zero("limit-dx[" + gen_name(g) + "]",
                                 alg_->dx(x).eps_to_zero() - onedim.algebra()->dx(x)));
        for (int q = 0; q <= pmax; ++q)
            out.push_back(check_zero("limit-t" + std::to_string(q) + "[" + gen_name(g) + "]",
                                     t_flow(1, q).apply(x).eps_to_zero() - onedim.t_flow(1, q).apply(x)));
        for (int k = 0; k <= kmax; ++k)
            out.push_back(check_zero("limit-tau" + std::to_string(k) + "[" + gen_name(g) + "]",
                                     tau_flow(k).apply(x).eps_to_zero() - onedim.tau_flow(k).apply(x)));
    }
    return out;
}

std::pair<LocalFunctional, LocalFunctional> kdv_poisson_pair() {
    DiffPoly th = DiffPoly::gen(Gen::theta(1, 0)), th1 = DiffPoly::gen(Gen::theta(1, 1)),
             th3 = DiffPoly::gen(Gen::theta(1, 3));
    return {LocalFunctional(1, Rational(1, 2) * th * th1, 2),
            LocalFunctional(1, Rational(1, 2) * (kdv_u() * th * th1 + Rational(1, 8) * eps2() * th * th3), 2)};
}

std::vector<CheckResult> check_kdv_poisson_pair() {
    auto [p0, p1] = kdv_poisson_pair();
    std::vector<CheckResult> out;
    for (auto& b : check_poisson_pair(p0, p1)) out.push_back(CheckResult{"schouten" + b.name, b.pass, b.residue, {}});
    return out;
}

std::vector<CheckResult> KdvCover::check_bihamiltonian_recovery(int smax) const {
    auto [p0, p1] = kdv_poisson_pair();
    std::vector<CheckResult> out;
    for (int which = 0; which <= 1; ++which) {
        Derivation d = dp_flow(which ? p1 : p0, alg_);
        const Derivation& t = tau_flow(which);
        for (int s = 0; s <= smax; ++s)
            for (Gen g : {Gen::jet(1, s), Gen::theta(1, s)}) {
                DiffPoly x = DiffPoly::gen(g);
                out.push_back(check_zero("P" + std::to_string(which) + "-flow[" + gen_name(g) + "]", t.apply(x) - d.apply(x)));
            }
    }
    return out;
}

}  // namespace supertau
