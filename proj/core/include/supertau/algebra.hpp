#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "supertau/diffpoly.hpp"
#include "supertau/errors.hpp"

namespace supertau {

struct GenHash {
    size_t operator()(Gen g) const { return std::hash<uint64_t>{}(g.key); }
};

// Thread-safe memo of generator images. Values are computed outside the lock,
// so recursive lookups are allowed; references stay valid for the table's lifetime.
class ImageCache {
public:
    template <class F>
    const DiffPoly& get(Gen g, F&& compute) const {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = map_.find(g);
            if (it != map_.end()) return it->second;
        }
        DiffPoly v = compute();
        std::lock_guard<std::mutex> lk(mu_);
        return map_.emplace(g, std::move(v)).first->second;
    }
    size_t size() const {
        std::lock_guard<std::mutex> lk(mu_);
        return map_.size();
    }

private:
    mutable std::mutex mu_;
    mutable std::unordered_map<Gen, DiffPoly, GenHash> map_;
};

// Applies the derivation with generator images `img` to p. Odd factors are
// differentiated in place and carried to the front with sign (-1)^index, which
// is correct for both even and odd derivations.
template <class ImageFn>
DiffPoly apply_derivation(const DiffPoly& p, ImageFn&& img) {
    PolyBuilder out;
    Monomial rest;
    for (const auto& t : p.terms()) {
        const Monomial& m = t.mono;
        for (size_t i = 0; i < m.even.size(); ++i) {
            Gen g{m.even[i].first};
            int32_t pw = m.even[i].second;
            if (g.kind() == Kind::ExpGen) {
                const DiffPoly& d = img(Gen::jet(g.alpha(), 0));
                if (!d.is_zero()) out.add_product(d, m, t.coeff * Rational(pw));
                continue;
            }
            const DiffPoly& d = img(g);
            if (d.is_zero()) continue;
            lower_even_at(m, i, rest);
            out.add_product(d, rest, t.coeff * Rational(pw));
        }
        for (size_t i = 0; i < m.odd.size(); ++i) {
            const DiffPoly& d = img(Gen{m.odd[i]});
            if (d.is_zero()) continue;
            int s = remove_odd_at(m, i, rest);
            out.add_product(d, rest, s < 0 ? -t.coeff : t.coeff);
        }
    }
    return out.finish();
}

// Rewrite context: generator alphabet of dimension n plus the rules that put
// x-derivatives of nonlocal generators back into normal form.
class Algebra {
public:
    // normal form of sigma^1_{alpha,k}, k >= 1; may call nf_sigma for lower levels
    using SigmaRule = std::function<DiffPoly(const Algebra&, int alpha, int k)>;
    // x-derivative of a OnePoint or PhiGen generator
    using GenRule = std::function<DiffPoly(const Algebra&, Gen g)>;

    explicit Algebra(int n) : n_(n) {}
    Algebra(const Algebra&) = delete;
    Algebra& operator=(const Algebra&) = delete;

    int n() const { return n_; }
    void set_sigma_rule(SigmaRule r) { sigma_rule_ = std::move(r); }
    void set_onepoint_rule(GenRule r) { onepoint_rule_ = std::move(r); }
    void set_phi_rule(GenRule r) { phi_rule_ = std::move(r); }
    bool has_sigma_rule() const { return static_cast<bool>(sigma_rule_); }

    // Normal form of sigma^s_{alpha,k}.
    DiffPoly nf_sigma(int alpha, int k, int s) const;
    // x-derivative of a normal-form generator.
    const DiffPoly& dx_gen(Gen g) const;
    // Total x-derivative; explicit times are constants.
    DiffPoly dx(const DiffPoly& p) const;
    // Total derivative along t^{1,0}: dx plus the explicit dependence on t^{1,0}.
    DiffPoly dx_full(const DiffPoly& p) const;

private:
    DiffPoly compute_dx(Gen g) const;

    int n_;
    SigmaRule sigma_rule_;
    GenRule onepoint_rule_;
    GenRule phi_rule_;
    ImageCache dx_cache_;
};

// A derivation on the normalized algebra fixed by the images of the base
// generators (u, sigma at derivative order 0, f, Phi, t, tau). Jets are
// prolonged with the total t^{1,0}-derivative.
class Derivation {
public:
    using BaseRule = std::function<DiffPoly(Gen)>;

    Derivation(std::shared_ptr<const Algebra> alg, int parity, BaseRule rule, std::string name = {})
        : alg_(std::move(alg)), parity_(parity & 1), rule_(std::move(rule)), name_(std::move(name)) {}

    int parity() const { return parity_; }
    const std::string& name() const { return name_; }
    const Algebra& algebra() const { return *alg_; }

    const DiffPoly& image(Gen g) const;
    DiffPoly apply(const DiffPoly& p) const;
    DiffPoly operator()(const DiffPoly& p) const { return apply(p); }

private:
    DiffPoly compute(Gen g) const;

    std::shared_ptr<const Algebra> alg_;
    int parity_;
    BaseRule rule_;
    std::string name_;
    ImageCache cache_;
};

// Graded commutator [D1, D2] applied to p.
DiffPoly commutator(const Derivation& d1, const Derivation& d2, const DiffPoly& p);

}  // namespace supertau
