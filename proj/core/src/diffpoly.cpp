#include "supertau/diffpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace supertau {

int32_t Monomial::power_of(Gen g) const {
    if (g.odd()) return std::binary_search(odd.begin(), odd.end(), g.key) ? 1 : 0;
    auto it = std::lower_bound(even.begin(), even.end(), g.key,
                               [](const EvenFactor& f, uint64_t k) { return f.first < k; });
    return (it != even.end() && it->first == g.key) ? it->second : 0;
}

bool operator<(const Monomial& a, const Monomial& b) {
    if (a.odd.size() != b.odd.size()) return a.odd.size() < b.odd.size();
    if (a.eps != b.eps) return a.eps < b.eps;
    if (a.c0 != b.c0) return a.c0 < b.c0;
    if (a.even != b.even)
        return std::lexicographical_compare(a.even.begin(), a.even.end(), b.even.begin(), b.even.end());
    return std::lexicographical_compare(a.odd.begin(), a.odd.end(), b.odd.begin(), b.odd.end());
}

size_t Monomial::hash() const {
    uint64_t h = 1469598103934665603ull ^ (static_cast<uint64_t>(static_cast<uint32_t>(eps)) << 32) ^
                 static_cast<uint32_t>(c0);
    auto mix = [&h](uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (const auto& f : even) {
        mix(f.first);
        mix(static_cast<uint64_t>(static_cast<uint32_t>(f.second)));
    }
    mix(0xabcdefull);
    for (uint64_t k : odd) mix(k);
    return static_cast<size_t>(h);
}

int monomial_mul(const Monomial& a, const Monomial& b, Monomial& out) {
    out.eps = a.eps + b.eps;
    out.c0 = a.c0 + b.c0;
    out.even.clear();
    out.odd.clear();
    // odd merge with inversion count
    size_t i = 0, j = 0;
    int inv = 0;
    while (i < a.odd.size() && j < b.odd.size()) {
        if (a.odd[i] == b.odd[j]) return 0;
        if (a.odd[i] < b.odd[j]) {
            out.odd.push_back(a.odd[i++]);
        } else {
            inv += static_cast<int>(a.odd.size() - i);
            out.odd.push_back(b.odd[j++]);
        }
    }
    while (i < a.odd.size()) out.odd.push_back(a.odd[i++]);
    while (j < b.odd.size()) out.odd.push_back(b.odd[j++]);
    i = j = 0;
    while (i < a.even.size() && j < b.even.size()) {
        if (a.even[i].first == b.even[j].first) {
            int32_t p = a.even[i].second + b.even[j].second;
            if (p != 0) out.even.emplace_back(a.even[i].first, p);
            ++i;
            ++j;
        } else if (a.even[i].first < b.even[j].first) {
            out.even.push_back(a.even[i++]);
        } else {
            out.even.push_back(b.even[j++]);
        }
    }
    while (i < a.even.size()) out.even.push_back(a.even[i++]);
    while (j < b.even.size()) out.even.push_back(b.even[j++]);
    return (inv & 1) ? -1 : 1;
}

int remove_odd_at(const Monomial& m, size_t idx, Monomial& out) {
    out = m;
    out.odd.erase(out.odd.begin() + static_cast<long>(idx));
    return (idx & 1) ? -1 : 1;
}

void lower_even_at(const Monomial& m, size_t idx, Monomial& out) {
    out = m;
    if (--out.even[idx].second == 0) out.even.erase(out.even.begin() + static_cast<long>(idx));
}

namespace {

using Acc = std::unordered_map<Monomial, Rational, MonomialHash>;

std::vector<Term> drain(Acc& acc) {
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& kv : acc)
        if (!kv.second.is_zero()) out.push_back(Term{kv.first, std::move(kv.second)});
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.mono < y.mono; });
    return out;
}

}  // namespace

DiffPoly::DiffPoly(const Rational& c) {
    if (!c.is_zero()) terms_.push_back(Term{Monomial{}, c});
}

DiffPoly DiffPoly::gen(Gen g, int32_t power) {
    Monomial m;
    if (g.odd()) {
        if (power == 0) return DiffPoly(1);
        if (power > 1) return DiffPoly();
        m.odd.push_back(g.key);
    } else if (power != 0) {
        m.even.emplace_back(g.key, power);
    }
    return monomial(std::move(m));
}

DiffPoly DiffPoly::monomial(Monomial m, Rational c) {
    DiffPoly p;
    if (!c.is_zero()) p.terms_.push_back(Term{std::move(m), std::move(c)});
    return p;
}

DiffPoly DiffPoly::eps(int32_t power) {
    Monomial m;
    m.eps = power;
    return monomial(std::move(m));
}

DiffPoly DiffPoly::c0(int32_t power) {
    Monomial m;
    m.c0 = power;
    return monomial(std::move(m));
}

DiffPoly DiffPoly::from_terms(std::vector<Term> terms) {
    Acc acc;
    for (auto& t : terms) {
        if (t.coeff.is_zero()) continue;
        auto it = acc.find(t.mono);
        if (it == acc.end())
            acc.emplace(std::move(t.mono), std::move(t.coeff));
        else
            it->second += t.coeff;
    }
    DiffPoly p;
    p.terms_ = drain(acc);
    return p;
}

bool DiffPoly::is_constant() const {
    for (const auto& t : terms_)
        if (!t.mono.is_constant()) return false;
    return true;
}

Rational DiffPoly::constant_term() const {
    for (const auto& t : terms_)
        if (t.mono.is_constant() && t.mono.eps == 0 && t.mono.c0 == 0) return t.coeff;
    return Rational(0);
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

void DiffPoly::add_scaled(const DiffPoly& o, bool negate) {
    if (o.terms_.empty()) return;
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].mono < o.terms_[j].mono)) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || o.terms_[j].mono < terms_[i].mono) {
            Term t = o.terms_[j++];
            if (negate) t.coeff = -t.coeff;
            out.push_back(std::move(t));
        } else {
            Rational c = terms_[i].coeff;
            if (negate)
                c -= o.terms_[j].coeff;
            else
                c += o.terms_[j].coeff;
            if (!c.is_zero()) out.push_back(Term{std::move(terms_[i].mono), std::move(c)});
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
    add_scaled(o, false);
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
    add_scaled(o, true);
    return *this;
}

DiffPoly& DiffPoly::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    if (c.is_one()) return *this;
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
    if (a.is_zero() || b.is_zero()) return DiffPoly();
    if (b.terms_.size() == 1) return a.mul_monomial(b.terms_[0].mono, b.terms_[0].coeff);
    Acc acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    Monomial m;
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            int s = monomial_mul(x.mono, y.mono, m);
            if (s == 0) continue;
            Rational c = x.coeff * y.coeff;
            if (s < 0) c = -c;
            auto it = acc.find(m);
            if (it == acc.end())
                acc.emplace(m, std::move(c));
            else
                it->second += c;
        }
    }
    DiffPoly p;
    p.terms_ = drain(acc);
    return p;
}

DiffPoly DiffPoly::mul_monomial(const Monomial& mono, const Rational& c) const {
    if (c.is_zero()) return DiffPoly();
    // The product map x -> x*mono is injective on monomials, but it does not
    // preserve the order, so re-sort.
    std::vector<Term> out;
    out.reserve(terms_.size());
    Monomial m;
    for (const auto& x : terms_) {
        int s = monomial_mul(x.mono, mono, m);
        if (s == 0) continue;
        Rational cc = x.coeff * c;
        if (s < 0) cc = -cc;
        out.push_back(Term{m, std::move(cc)});
    }
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.mono < y.mono; });
    DiffPoly p;
    p.terms_ = std::move(out);
    return p;
}

DiffPoly DiffPoly::pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative power of a polynomial");
    DiffPoly r(1), b(*this);
    while (k > 0) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

bool operator==(const DiffPoly& a, const DiffPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
}

std::vector<int> DiffPoly::odd_degrees() const {
    std::vector<int> d;
    for (const auto& t : terms_) d.push_back(t.mono.odd_degree());
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
}

int DiffPoly::uniform_odd_degree() const {
    auto d = odd_degrees();
    if (d.empty()) return 0;
    return d.size() == 1 ? d[0] : -1;
}

int DiffPoly::max_eps() const {
    int m = INT32_MIN;
    for (const auto& t : terms_) m = std::max(m, t.mono.eps);
    return terms_.empty() ? 0 : m;
}

int DiffPoly::min_eps() const {
    int m = INT32_MAX;
    for (const auto& t : terms_) m = std::min(m, t.mono.eps);
    return terms_.empty() ? 0 : m;
}

bool DiffPoly::any_gen(const std::function<bool(Gen)>& pred) const {
    for (const auto& t : terms_) {
        for (const auto& f : t.mono.even)
            if (pred(Gen{f.first})) return true;
        for (uint64_t k : t.mono.odd)
            if (pred(Gen{k})) return true;
    }
    return false;
}

bool DiffPoly::has_kind(Kind k) const {
    return any_gen([k](Gen g) { return g.kind() == k; });
}

int DiffPoly::max_jet_order() const {
    int m = -1;
    for (const auto& t : terms_) {
        for (const auto& f : t.mono.even) {
            Gen g{f.first};
            if (g.kind() == Kind::EvenJet) m = std::max(m, g.deriv());
            if (g.kind() == Kind::ExpGen) m = std::max(m, 0);
        }
        for (uint64_t k : t.mono.odd) {
            Gen g{k};
            if (g.kind() == Kind::OddSigma && g.level() == 0) m = std::max(m, g.deriv());
        }
    }
    return m;
}

DiffPoly DiffPoly::filter(const std::function<bool(const Monomial&)>& keep) const {
    DiffPoly p;
    for (const auto& t : terms_)
        if (keep(t.mono)) p.terms_.push_back(t);
    return p;
}

DiffPoly DiffPoly::eps_coefficient(int32_t power) const {
    std::vector<Term> out;
    for (const auto& t : terms_)
        if (t.mono.eps == power) {
            Term x = t;
            x.mono.eps = 0;
            out.push_back(std::move(x));
        }
    return from_terms(std::move(out));
}

DiffPoly DiffPoly::eps_to_zero() const {
    if (min_eps() < 0) throw std::domain_error("negative power of the dispersion parameter at eps = 0");
    return eps_coefficient(0);
}

DiffPoly DiffPoly::c0_coefficient(int32_t power) const {
    std::vector<Term> out;
    for (const auto& t : terms_)
        if (t.mono.c0 == power) {
            Term x = t;
            x.mono.c0 = 0;
            out.push_back(std::move(x));
        }
    return from_terms(std::move(out));
}

DiffPoly DiffPoly::substitute_c0(const Rational& value) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        Term x = t;
        Rational f(1);
        for (int i = 0; i < x.mono.c0; ++i) f *= value;
        x.mono.c0 = 0;
        x.coeff *= f;
        out.push_back(std::move(x));
    }
    return from_terms(std::move(out));
}

DiffPoly DiffPoly::coefficient_of(Gen g, int32_t power) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.mono.power_of(g) != power) continue;
        Term x = t;
        if (power != 0) {
            auto it = std::find_if(x.mono.even.begin(), x.mono.even.end(),
                                   [&](const EvenFactor& f) { return f.first == g.key; });
            x.mono.even.erase(it);
        }
        out.push_back(std::move(x));
    }
    return from_terms(std::move(out));
}

DiffPoly partial(const DiffPoly& p, Gen g) {
    if (g.kind() == Kind::ExpGen) throw std::invalid_argument("partial: use partial_field for exponentials");
    std::vector<Term> out;
    Monomial m;
    for (const auto& t : p.terms()) {
        if (g.odd()) {
            auto it = std::lower_bound(t.mono.odd.begin(), t.mono.odd.end(), g.key);
            if (it == t.mono.odd.end() || *it != g.key) continue;
            int s = remove_odd_at(t.mono, static_cast<size_t>(it - t.mono.odd.begin()), m);
            out.push_back(Term{m, s < 0 ? -t.coeff : t.coeff});
        } else {
            for (size_t i = 0; i < t.mono.even.size(); ++i) {
                if (t.mono.even[i].first != g.key) continue;
                int32_t pw = t.mono.even[i].second;
                lower_even_at(t.mono, i, m);
                out.push_back(Term{m, t.coeff * Rational(pw)});
                break;
            }
        }
    }
    return DiffPoly::from_terms(std::move(out));
}

DiffPoly partial_field(const DiffPoly& p, int alpha) {
    DiffPoly r = partial(p, Gen::jet(alpha, 0));
    Gen e = Gen::expo(alpha);
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
        int32_t k = t.mono.power_of(e);
        if (k != 0) out.push_back(Term{t.mono, t.coeff * Rational(k)});
    }
    return r + DiffPoly::from_terms(std::move(out));
}

void PolyBuilder::add(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = acc_.find(m);
    if (it == acc_.end())
        acc_.emplace(m, c);
    else
        it->second += c;
}

void PolyBuilder::add_product(const DiffPoly& p, const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    Monomial out;
    for (const auto& t : p.terms()) {
        int s = monomial_mul(t.mono, m, out);
        if (s == 0) continue;
        Rational cc = t.coeff * c;
        if (s < 0) cc = -cc;
        add(out, cc);
    }
}

void PolyBuilder::add(const DiffPoly& p, const Rational& c) {
    for (const auto& t : p.terms()) add(t.mono, t.coeff * c);
}

DiffPoly PolyBuilder::finish() {
    std::vector<Term> out;
    out.reserve(acc_.size());
    for (auto& kv : acc_)
        if (!kv.second.is_zero()) out.push_back(Term{kv.first, std::move(kv.second)});
    acc_.clear();
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.mono < y.mono; });
    DiffPoly p;
    p = DiffPoly::from_sorted(std::move(out));
    return p;
}

std::string gen_name(Gen g) {
    std::ostringstream os;
    switch (g.kind()) {
        case Kind::EvenJet: os << "u" << g.alpha() << "_" << g.deriv(); break;
        case Kind::OnePoint: os << "f" << g.alpha() << "_" << g.level(); break;
        case Kind::EvenTime: os << "t" << g.alpha() << "_" << g.level(); break;
        case Kind::ExpGen: os << "exp" << g.alpha(); break;
        case Kind::OddSigma:
            if (g.level() == 0)
                os << "theta" << g.alpha() << "_" << g.deriv();
            else
                os << "sigma" << g.alpha() << "_" << g.level() << "_" << g.deriv();
            break;
        case Kind::PhiGen: os << "Phi" << g.alpha() << "_" << g.level() << "^" << g.phi_n(); break;
        case Kind::OddTime: os << "tau" << g.level(); break;
    }
    return os.str();
}

std::string DiffPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        std::string c = t.coeff.to_string();
        if (!first) {
            if (c[0] == '-') {
                os << " - ";
                c = c.substr(1);
            } else {
                os << " + ";
            }
        }
        first = false;
        bool unit = t.mono.is_constant() && t.mono.eps == 0 && t.mono.c0 == 0;
        if (c != "1" || unit) os << c;
        bool need = (c != "1" || unit);
        auto factor = [&](const std::string& s) {
            if (need) os << "*";
            os << s;
            need = true;
        };
        if (t.mono.eps) factor(t.mono.eps == 1 ? "eps" : "eps^" + std::to_string(t.mono.eps));
        if (t.mono.c0) factor(t.mono.c0 == 1 ? "c0" : "c0^" + std::to_string(t.mono.c0));
        for (const auto& f : t.mono.even)
            factor(f.second == 1 ? gen_name(Gen{f.first}) : gen_name(Gen{f.first}) + "^" + std::to_string(f.second));
        for (uint64_t k : t.mono.odd) factor(gen_name(Gen{k}));
    }
    return os.str();
}

}  // namespace supertau
