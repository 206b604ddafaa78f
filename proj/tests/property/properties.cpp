#include "properties.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "supertau/antiderivative.hpp"
#include "supertau/frobenius.hpp"
#include "supertau/kdv.hpp"
#include "supertau/variational.hpp"

namespace property {

using namespace supertau;

namespace {

class Random {
public:
    explicit Random(uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[uniform(0, static_cast<int>(v.size()) - 1)];
    }
    Rational coefficient() {
        int n = 0;
        while (n == 0) n = uniform(-6, 6);
        return Rational(n, uniform(1, 4));
    }

private:
    std::mt19937_64 rng_;
};

struct Pool {
    std::vector<Gen> even;
    std::vector<Gen> odd;
    bool eps = false;
    bool c0 = false;
};

// A polynomial whose terms all have `odd_count` odd factors and at least one generator.
DiffPoly random_poly(Random& r, const Pool& pool, int odd_count, int max_terms = 3, int max_even = 2) {
    DiffPoly p;
    int terms = r.uniform(1, max_terms);
    for (int t = 0; t < terms; ++t) {
        DiffPoly m(r.coefficient());
        int ne = r.uniform(odd_count == 0 ? 1 : 0, max_even);
        for (int i = 0; i < ne; ++i) {
            Gen g = r.pick(pool.even);
            int pw = g.kind() == Kind::ExpGen ? r.pick(std::vector<int>{-2, -1, 1, 2}) : r.uniform(1, 2);
            m = m * DiffPoly::gen(g, pw);
        }
        // Exponentials can cancel; the first pool entry is a jet.
        if (odd_count == 0 && m.is_constant()) m = m * DiffPoly::gen(pool.even.front());
        for (int i = 0; i < odd_count; ++i) m = m * DiffPoly::gen(r.pick(pool.odd));
        if (pool.eps) m = m * DiffPoly::eps(2 * r.uniform(0, 1));
        if (pool.c0) m = m * DiffPoly::c0(r.uniform(0, 1));
        p += m;
    }
    return p;
}

Pool free_pool(int n) {
    Pool p;
    for (int a = 1; a <= n; ++a) {
        for (int s = 0; s <= 3; ++s) {
            p.even.push_back(Gen::jet(a, s));
            p.odd.push_back(Gen::theta(a, s));
        }
        p.even.push_back(Gen::expo(a));
    }
    return p;
}

void record(Outcome& o, bool ok, const std::function<std::string()>& describe) {
    ++o.cases;
    if (ok) return;
    if (o.failures++ == 0) o.first_failure = describe();
}

struct CoverCase {
    std::shared_ptr<const TauCover> cover;
    Pool pool;
};

std::vector<CoverCase> covers() {
    std::vector<CoverCase> out;
    auto spec = std::make_shared<FrobeniusSpec>(load_spec(builtin_spec_json("cp1")));
    auto cp1 = std::make_shared<FrobeniusCover>(spec);
    Pool a;
    for (int al = 1; al <= 2; ++al) {
        for (int s = 0; s <= 2; ++s) {
            a.even.push_back(Gen::jet(al, s));
            a.odd.push_back(Gen::theta(al, s));
        }
        for (int k = 1; k <= 2; ++k) a.odd.push_back(Gen::sigma(al, k));
        for (int p = 0; p <= 2; ++p) {
            a.even.push_back(Gen::onepoint(al, p));
            a.even.push_back(Gen::time(al, p));
        }
    }
    a.even.push_back(Gen::expo(2));
    for (int n = 0; n <= 2; ++n) a.odd.push_back(Gen::phi(1, 1, n));
    for (int k = 0; k <= 2; ++k) a.odd.push_back(Gen::otime(k));
    a.c0 = true;
    out.push_back({cp1, a});

    auto kdv = std::make_shared<KdvCover>();
    Pool b;
    for (int s = 0; s <= 3; ++s) {
        b.even.push_back(Gen::jet(1, s));
        b.odd.push_back(Gen::theta(1, s));
    }
    for (int k = 1; k <= 2; ++k) b.odd.push_back(Gen::sigma(1, k));
    for (int p = 0; p <= 2; ++p) {
        b.even.push_back(Gen::onepoint(1, p));
        b.even.push_back(Gen::time(1, p));
    }
    for (int k = 0; k <= 2; ++k) b.odd.push_back(Gen::otime(k));
    b.eps = true;
    out.push_back({kdv, b});
    return out;
}

// Independent normal form: a word is a coefficient times factors in any order.
struct Word {
    Rational coeff;
    std::vector<std::pair<Gen, int>> factors;
    int eps = 0;
    int c0 = 0;
};

using OracleKey = std::tuple<std::map<uint64_t, int>, std::vector<uint64_t>, int, int>;
using OraclePoly = std::map<OracleKey, Rational>;

void oracle_add(OraclePoly& p, const OracleKey& k, const Rational& c) {
    auto& slot = p[k];
    slot += c;
    if (slot.is_zero()) p.erase(k);
}

void oracle_normalize(const Word& w, OraclePoly& out) {
    std::map<uint64_t, int> even;
    std::vector<uint64_t> odd;
    for (auto [g, pw] : w.factors) {
        if (g.odd()) {
            odd.push_back(g.key);
            continue;
        }
        if ((even[g.key] += pw) == 0) even.erase(g.key);
    }
    // Bubble sort: each adjacent swap of odd factors flips the sign.
    Rational c = w.coeff;
    for (size_t i = 0; i < odd.size(); ++i)
        for (size_t j = 0; j + 1 < odd.size() - i; ++j)
            if (odd[j] > odd[j + 1]) {
                std::swap(odd[j], odd[j + 1]);
                c = -c;
            }
    for (size_t i = 0; i + 1 < odd.size(); ++i)
        if (odd[i] == odd[i + 1]) return;
    oracle_add(out, {even, odd, w.eps, w.c0}, c);
}

std::vector<Word> words_of(const DiffPoly& p) {
    std::vector<Word> out;
    for (const auto& t : p.terms()) {
        Word w{t.coeff, {}, t.mono.eps, t.mono.c0};
        for (auto [k, pw] : t.mono.even) w.factors.emplace_back(Gen{k}, pw);
        for (uint64_t k : t.mono.odd) w.factors.emplace_back(Gen{k}, 1);
        out.push_back(std::move(w));
    }
    return out;
}

OraclePoly oracle_of(const DiffPoly& p) {
    OraclePoly out;
    for (const auto& w : words_of(p)) oracle_normalize(w, out);
    return out;
}

// Expands the product of the factors word by word, keeping the factor order.
OraclePoly oracle_product(const std::vector<DiffPoly>& fs) {
    std::vector<Word> acc{Word{Rational(1), {}, 0, 0}};
    for (const auto& f : fs) {
        std::vector<Word> next;
        for (const auto& a : acc)
            for (const auto& b : words_of(f)) {
                Word w{a.coeff * b.coeff, a.factors, a.eps + b.eps, a.c0 + b.c0};
                w.factors.insert(w.factors.end(), b.factors.begin(), b.factors.end());
                next.push_back(std::move(w));
            }
        acc = std::move(next);
    }
    OraclePoly out;
    for (const auto& w : acc) oracle_normalize(w, out);
    return out;
}

// Product over a random binary tree.
DiffPoly tree_product(Random& r, const std::vector<DiffPoly>& fs, size_t lo, size_t hi) {
    if (hi - lo == 1) return fs[lo];
    size_t mid = lo + 1 + r.uniform(0, static_cast<int>(hi - lo) - 2);
    return tree_product(r, fs, lo, mid) * tree_product(r, fs, mid, hi);
}

}  // namespace

Outcome leibniz(int cases, uint64_t seed) {
    Outcome o{"leibniz"};
    Random r(seed);
    auto cs = covers();
    for (int i = 0; i < cases; ++i) {
        const CoverCase& c = cs[i % cs.size()];
        const TauCover& cover = *c.cover;
        int which = r.uniform(0, 2);
        int pa = r.uniform(0, 2);
        DiffPoly a = random_poly(r, c.pool, pa), b = random_poly(r, c.pool, r.uniform(0, 2));
        DiffPoly lhs, rhs;
        std::string name;
        if (which == 0) {
            const Algebra& alg = *cover.algebra();
            lhs = alg.dx(a * b);
            rhs = alg.dx(a) * b + a * alg.dx(b);
            name = "dx";
        } else {
            const Derivation& d = which == 1 ? cover.t_flow(r.uniform(1, cover.n()), r.uniform(0, 2))
                                             : cover.tau_flow(r.uniform(0, 2));
            lhs = d.apply(a * b);
            DiffPoly second = a * d.apply(b);
            rhs = d.apply(a) * b + ((d.parity() * pa) % 2 ? -second : second);
            name = d.name();
        }
        record(o, lhs == rhs, [&] {
            return cover.name() + " " + name + " a=" + a.to_string() + " b=" + b.to_string();
        });
    }
    return o;
}

Outcome antiderivative_of_dx(int cases, uint64_t seed) {
    Outcome o{"antiderivative-of-dx"};
    Random r(seed);
    const Pool pools[] = {free_pool(1), free_pool(2)};
    for (int i = 0; i < cases; ++i) {
        const Pool& pool = pools[i % 2];
        DiffPoly p = random_poly(r, pool, r.uniform(0, 2));
        DiffPoly back;
        std::string err;
        try {
            back = antiderivative(dx_free(p));
        } catch (const Error& e) {
            err = e.what();
        }
        record(o, err.empty() && back == p, [&] { return "p=" + p.to_string() + (err.empty() ? "" : " error: " + err); });
    }
    return o;
}

Outcome lift_independence(int cases, uint64_t seed) {
    Outcome o{"lift-independence"};
    Random r(seed);
    for (int i = 0; i < cases; ++i) {
        int n = 1 + i % 2;
        Pool pool = free_pool(n);
        pool.even.erase(std::remove_if(pool.even.begin(), pool.even.end(),
                                       [](Gen g) { return g.kind() == Kind::ExpGen; }),
                        pool.even.end());
        int d = r.uniform(0, 2);
        DiffPoly f = random_poly(r, pool, d), q = random_poly(r, pool, d);
        DiffPoly lifted = f + dx_free(q);
        bool ok = true;
        for (int a = 1; a <= n && ok; ++a)
            for (Family fam : {Family::Even, Family::Odd})
                ok = ok && variational_derivative(lifted, fam, a) == variational_derivative(f, fam, a);
        record(o, ok, [&] { return "F=" + f.to_string() + " q=" + q.to_string(); });
    }
    return o;
}

Outcome confluence(int cases, uint64_t seed) {
    Outcome o{"confluence"};
    Random r(seed);
    auto cs = covers();
    for (int i = 0; i < cases; ++i) {
        // At most six distinct generators per case.
        Pool pool;
        const Pool& big = cs[i % cs.size()].pool;
        for (int j = 0; j < 3; ++j) pool.even.push_back(r.pick(big.even));
        for (int j = 0; j < 3; ++j) pool.odd.push_back(r.pick(big.odd));
        pool.eps = big.eps;
        pool.c0 = big.c0;
        int nf = r.uniform(2, 4);
        std::vector<DiffPoly> fs;
        std::vector<int> parity;
        for (int j = 0; j < nf; ++j) {
            int odd = r.uniform(0, 1);
            fs.push_back(random_poly(r, pool, odd, 3, 1));
            parity.push_back(odd);
        }
        DiffPoly left = fs[0], right = fs[nf - 1];
        for (int j = 1; j < nf; ++j) left = left * fs[j];
        for (int j = nf - 2; j >= 0; --j) right = fs[j] * right;
        DiffPoly tree = tree_product(r, fs, 0, fs.size());

        // A random permutation with the Koszul sign of the odd factors it crosses.
        std::vector<int> perm(nf);
        for (int j = 0; j < nf; ++j) perm[j] = j;
        std::shuffle(perm.begin(), perm.end(), std::mt19937(static_cast<unsigned>(r.uniform(0, 1 << 30))));
        int sign = 1;
        for (int x = 0; x < nf; ++x)
            for (int y = x + 1; y < nf; ++y)
                if (perm[x] > perm[y] && parity[perm[x]] && parity[perm[y]]) sign = -sign;
        DiffPoly permuted{Rational(sign)};
        for (int j : perm) permuted = permuted * fs[j];

        bool ok = left == right && left == tree && left == permuted && oracle_of(left) == oracle_product(fs);
        record(o, ok, [&] {
            std::string s;
            for (const auto& f : fs) s += "(" + f.to_string() + ")";
            return s;
        });
    }
    return o;
}

}  // namespace property
