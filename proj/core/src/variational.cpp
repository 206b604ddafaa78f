#include "supertau/variational.hpp"

#include "supertau/antiderivative.hpp"

namespace supertau {

namespace {

int max_order(const DiffPoly& p, Kind k, int alpha) {
    int m = -1;
    p.any_gen([&](Gen g) {
        if (g.kind() == k && g.alpha() == alpha && (k != Kind::OddSigma || g.level() == 0)) m = std::max(m, g.deriv());
        return false;
    });
    return m;
}

void require_free(const DiffPoly& p) {
    if (!is_free(p)) throw UnsupportedGenerators("variational calculus needs the free subalgebra: " + p.to_string());
}

}  // namespace

LocalFunctional::LocalFunctional(int n, DiffPoly density, int degree)
    : n_(n), density_(std::move(density)), degree_(degree) {
    if (!is_free(density_)) throw ValidationError("local functional outside the free subalgebra");
    int d = density_.uniform_odd_degree();
    if (d < 0) throw ValidationError("local functional with mixed odd degree");
    if (!density_.is_zero() && d != degree) throw ValidationError("local functional degree mismatch");
}

LocalFunctional LocalFunctional::of(int n, DiffPoly density) {
    int d = density.uniform_odd_degree();
    if (d < 0) throw ValidationError("local functional with mixed odd degree");
    return LocalFunctional(n, std::move(density), d);
}

DiffPoly variational_derivative(const DiffPoly& density, Family fam, int alpha) {
    require_free(density);
    Kind k = fam == Family::Even ? Kind::EvenJet : Kind::OddSigma;
    int top = max_order(density, k, alpha);
    bool has_exp = fam == Family::Even && density.any_gen([alpha](Gen g) { return g == Gen::expo(alpha); });
    if (top < 0 && !has_exp) return DiffPoly();
    top = std::max(top, 0);
    // Horner: E = d_0 - dx(d_1 - dx(d_2 - ...))
    DiffPoly acc;
    for (int s = top; s >= 0; --s) {
        DiffPoly ds;
        if (fam == Family::Even)
            ds = s == 0 ? partial_field(density, alpha) : partial(density, Gen::jet(alpha, s));
        else
            ds = partial(density, Gen::theta(alpha, s));
        acc = ds - dx_free(acc);
    }
    return acc;
}

DiffPoly variational_derivative(const LocalFunctional& f, Family fam, int alpha) {
    return variational_derivative(f.density(), fam, alpha);
}

bool functional_is_zero(const DiffPoly& density, int n) {
    require_free(density);
    for (const auto& t : density.terms())
        if (t.mono.is_constant()) return false;
    for (int a = 1; a <= n; ++a) {
        if (!variational_derivative(density, Family::Even, a).is_zero()) return false;
        if (!variational_derivative(density, Family::Odd, a).is_zero()) return false;
    }
    return true;
}

TotalDerivativeResult is_total_derivative(const DiffPoly& p, int n) {
    TotalDerivativeResult r;
    if (p.is_zero()) {
        r.exact = true;
        return r;
    }
    if (!functional_is_zero(p, n)) return r;
    r.witness = antiderivative(p);
    r.exact = true;
    return r;
}

bool functional_equal(const LocalFunctional& a, const LocalFunctional& b) {
    if (a.degree() != b.degree() && !a.density().is_zero() && !b.density().is_zero()) return false;
    return functional_is_zero(a.density() - b.density(), std::max(a.n(), b.n()));
}

LocalFunctional schouten_bracket(const LocalFunctional& p, const LocalFunctional& q) {
    if (p.n() != q.n()) throw DimensionMismatch("bracket of functionals over different dimensions");
    int n = p.n();
    DiffPoly out;
    Rational sgn(p.degree() % 2 == 0 ? 1 : -1);
    for (int a = 1; a <= n; ++a) {
        DiffPoly pt = variational_derivative(p, Family::Odd, a);
        DiffPoly pu = variational_derivative(p, Family::Even, a);
        DiffPoly qt = variational_derivative(q, Family::Odd, a);
        DiffPoly qu = variational_derivative(q, Family::Even, a);
        out += pt * qu + sgn * (pu * qt);
    }
    return LocalFunctional(n, out, p.degree() + q.degree() - 1);
}

void DiffOperator::add(int a, int b, int s, const DiffPoly& coeff) {
    auto& e = entries[static_cast<size_t>(a - 1)][static_cast<size_t>(b - 1)];
    if (e.size() <= static_cast<size_t>(s)) e.resize(static_cast<size_t>(s) + 1);
    e[static_cast<size_t>(s)] += coeff;
}

std::vector<DiffPoly> apply_operator(const DiffOperator& op, const std::vector<DiffPoly>& w) {
    if (static_cast<int>(w.size()) != op.n) throw DimensionMismatch("operator applied to a vector of the wrong size");
    std::vector<DiffPoly> out(w.size());
    for (int b = 0; b < op.n; ++b) {
        size_t smax = 0;
        for (int a = 0; a < op.n; ++a) smax = std::max(smax, op.entries[a][b].size());
        std::vector<DiffPoly> jets{w[static_cast<size_t>(b)]};
        for (size_t s = 1; s < smax; ++s) jets.push_back(dx_free(jets.back()));
        for (int a = 0; a < op.n; ++a) {
            const auto& e = op.entries[a][b];
            for (size_t s = 0; s < e.size(); ++s)
                if (!e[s].is_zero()) out[static_cast<size_t>(a)] += e[s] * jets[s];
        }
    }
    return out;
}

Derivation dp_flow(const LocalFunctional& p, std::shared_ptr<const Algebra> alg) {
    if (!alg) alg = std::make_shared<Algebra>(p.n());
    std::vector<DiffPoly> du, dth;
    Rational sgn(p.degree() % 2 == 0 ? 1 : -1);
    for (int a = 1; a <= p.n(); ++a) {
        du.push_back(variational_derivative(p, Family::Odd, a));
        dth.push_back(sgn * variational_derivative(p, Family::Even, a));
    }
    return Derivation(
        alg, p.degree() + 1,
        [du, dth](Gen g) -> DiffPoly {
            size_t a = static_cast<size_t>(g.alpha() - 1);
            if (g.kind() == Kind::EvenJet) return du.at(a);
            if (g.kind() == Kind::OddSigma && g.level() == 0) return dth.at(a);
            throw UnsupportedGenerators("D_P is defined on u and theta only: " + gen_name(g));
        },
        "D_P");
}

std::vector<BracketCheck> check_poisson_pair(const LocalFunctional& p0, const LocalFunctional& p1) {
    if (p0.degree() != 2 || p1.degree() != 2) throw ValidationError("Poisson pair needs two bivectors");
    std::vector<BracketCheck> out;
    auto one = [&](const std::string& name, const LocalFunctional& a, const LocalFunctional& b) {
        LocalFunctional br = schouten_bracket(a, b);
        BracketCheck c;
        c.name = name;
        c.residue = br.density();
        c.pass = functional_is_zero(br.density(), br.n());
        out.push_back(std::move(c));
    };
    one("[P0,P0]", p0, p0);
    one("[P0,P1]", p0, p1);
    one("[P1,P1]", p1, p1);
    return out;
}

}  // namespace supertau
