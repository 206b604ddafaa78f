#include "supertau/algebra.hpp"

#include <cassert>

namespace supertau {

namespace {

#ifndef NDEBUG
// Termination guard: the image of sigma^1_{alpha,k} may only mention
// free sigma generators of level below k and no rewritten jets.
bool rank_decreases(const DiffPoly& img, int k) {
    return !img.any_gen([k](Gen g) {
        if (g.kind() != Kind::OddSigma || g.level() == 0) return false;
        return g.level() >= k || g.deriv() > 0;
    });
}
#endif

}  // namespace

DiffPoly Algebra::nf_sigma(int alpha, int k, int s) const {
    if (s == 0 || k == 0) return DiffPoly::gen(Gen::sigma(alpha, k, s));
    return dx_gen(Gen::sigma(alpha, k, s - 1));
}

const DiffPoly& Algebra::dx_gen(Gen g) const {
    return dx_cache_.get(g, [&] { return compute_dx(g); });
}

DiffPoly Algebra::compute_dx(Gen g) const {
    switch (g.kind()) {
        case Kind::EvenJet: return DiffPoly::gen(g.with_deriv(g.deriv() + 1));
        case Kind::OddSigma: {
            if (g.level() == 0) return DiffPoly::gen(g.with_deriv(g.deriv() + 1));
            if (g.deriv() == 0) {
                if (!sigma_rule_) throw AlgebraError("no rewrite rule for sigma derivatives");
                DiffPoly img = sigma_rule_(*this, g.alpha(), g.level());
                assert(rank_decreases(img, g.level()));
                return img;
            }
            return dx(dx_gen(g.with_deriv(g.deriv() - 1)));
        }
        case Kind::OnePoint:
            if (!onepoint_rule_) throw AlgebraError("no rewrite rule for one-point functions");
            return onepoint_rule_(*this, g);
        case Kind::PhiGen:
            if (!phi_rule_) throw AlgebraError("no rewrite rule for Phi generators");
            return phi_rule_(*this, g);
        case Kind::ExpGen: return DiffPoly::gen(Gen::jet(g.alpha(), 1));
        case Kind::EvenTime:
        case Kind::OddTime: return DiffPoly();
    }
    return DiffPoly();
}

DiffPoly Algebra::dx(const DiffPoly& p) const {
    return apply_derivation(p, [this](Gen g) -> const DiffPoly& { return dx_gen(g); });
}

DiffPoly Algebra::dx_full(const DiffPoly& p) const {
    DiffPoly r = dx(p);
    Gen x = Gen::time(1, 0);
    if (p.any_gen([x](Gen g) { return g == x; })) r += partial(p, x);
    return r;
}

const DiffPoly& Derivation::image(Gen g) const {
    return cache_.get(g, [&] { return compute(g); });
}

DiffPoly Derivation::compute(Gen g) const {
    switch (g.kind()) {
        case Kind::EvenJet:
        case Kind::OddSigma:
            if (g.deriv() > 0) {
                if (g.kind() == Kind::OddSigma && g.level() > 0)
                    throw AlgebraError("derivation applied to a non-normal generator " + gen_name(g));
                return alg_->dx_full(image(g.with_deriv(g.deriv() - 1)));
            }
            return rule_(g);
        case Kind::ExpGen: throw AlgebraError("exponential generators are differentiated through their field");
        default: return rule_(g);
    }
}

DiffPoly Derivation::apply(const DiffPoly& p) const {
    return apply_derivation(p, [this](Gen g) -> const DiffPoly& { return image(g); });
}

DiffPoly commutator(const Derivation& d1, const Derivation& d2, const DiffPoly& p) {
    DiffPoly a = d1.apply(d2.apply(p));
    DiffPoly b = d2.apply(d1.apply(p));
    if (d1.parity() & d2.parity()) return a + b;
    return a - b;
}

}  // namespace supertau
