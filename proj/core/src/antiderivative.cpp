#include "supertau/antiderivative.hpp"

#include <algorithm>

#include "supertau/algebra.hpp"

namespace supertau {

namespace {

bool free_gen(Gen g) {
    switch (g.kind()) {
        case Kind::EvenJet:
        case Kind::ExpGen: return true;
        case Kind::OddSigma: return g.level() == 0;
        default: return false;
    }
}

void set_power(Monomial& m, uint64_t key, int32_t power) {
    auto it = std::lower_bound(m.even.begin(), m.even.end(), key,
                               [](const EvenFactor& f, uint64_t k) { return f.first < k; });
    if (it != m.even.end() && it->first == key) {
        if (power == 0)
            m.even.erase(it);
        else
            it->second = power;
    } else if (power != 0) {
        m.even.insert(it, EvenFactor{key, power});
    }
}

// Indefinite integral in the even variable x, including x^a e^{qx} when x is
// the undifferentiated field carrying exponentials.
DiffPoly integrate(const DiffPoly& a, Gen x) {
    Gen ex = Gen::expo(x.alpha());
    bool with_exp = x.deriv() == 0;
    PolyBuilder out;
    for (const auto& t : a.terms()) {
        int32_t pw = t.mono.power_of(x);
        int32_t q = with_exp ? t.mono.power_of(ex) : 0;
        if (q == 0) {
            Monomial m = t.mono;
            set_power(m, x.key, pw + 1);
            out.add(m, t.coeff / Rational(pw + 1));
            continue;
        }
        Rational fall(1);  // a!/(a-j)!
        Rational qpow(q);  // q^{j+1}
        for (int j = 0; j <= pw; ++j) {
            Monomial m = t.mono;
            set_power(m, x.key, pw - j);
            Rational c = t.coeff * fall / qpow;
            out.add(m, (j & 1) ? -c : c);
            fall *= Rational(pw - j);
            qpow *= Rational(q);
        }
    }
    return out.finish();
}

bool has_order(const DiffPoly& p, int k) {
    return p.any_gen([k](Gen g) {
        return (g.kind() == Kind::EvenJet || g.kind() == Kind::OddSigma) && g.deriv() == k;
    });
}

Gen top_variable(const DiffPoly& p, int k) {
    Gen best{~0ull};
    p.any_gen([&](Gen g) {
        if ((g.kind() == Kind::EvenJet || g.kind() == Kind::OddSigma) && g.deriv() == k && g < best) best = g;
        return false;
    });
    return best;
}

}  // namespace

bool is_free(const DiffPoly& p) {
    return !p.any_gen([](Gen g) { return !free_gen(g); });
}

DiffPoly dx_free(const DiffPoly& p) {
    return apply_derivation(p, [](Gen g) -> DiffPoly {
        if (!free_gen(g)) throw UnsupportedGenerators("dx_free: " + gen_name(g));
        return DiffPoly::gen(g.with_deriv(g.deriv() + 1));
    });
}

DiffPoly antiderivative(const DiffPoly& p) {
    if (!is_free(p)) throw UnsupportedGenerators("antiderivative needs the free subalgebra: " + p.to_string());
    DiffPoly r = p;
    DiffPoly q;
    size_t guard = 0;
    const size_t limit = 64 + 16 * p.size();
    while (!r.is_zero()) {
        for (const auto& t : r.terms())
            if (t.mono.is_constant()) throw NotATotalDerivative("generator-free remainder in " + p.to_string());
        int k = r.max_jet_order();
        if (k <= 0) throw NotATotalDerivative("remainder of order zero: " + r.to_string());
        Gen w = top_variable(r, k);
        DiffPoly a = partial(r, w);
        if (has_order(a, k)) throw NotATotalDerivative("nonlinear in " + gen_name(w) + ": " + p.to_string());
        DiffPoly piece;
        Gen lower = w.with_deriv(k - 1);
        if (w.odd()) {
            if (a.any_gen([lower](Gen g) { return g == lower; }))
                throw NotATotalDerivative("odd obstruction at " + gen_name(w) + ": " + p.to_string());
            piece = DiffPoly::gen(lower) * a;
        } else {
            piece = integrate(a, lower);
        }
        q += piece;
        r -= dx_free(piece);
        if (++guard > limit) throw NotATotalDerivative("no antiderivative found for " + p.to_string());
    }
    return q;
}

}  // namespace supertau
