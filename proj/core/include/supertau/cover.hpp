#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "supertau/algebra.hpp"
#include "supertau/diffpoly.hpp"

namespace supertau {

// Square rational matrix with 1-based indices; row/column 0 is unused.
using RMatrix = std::vector<std::vector<Rational>>;
RMatrix identity_matrix(int n);
RMatrix matrix_product(const RMatrix& a, const RMatrix& b);
bool matrix_is_zero(const RMatrix& a);
// Throws NotInvertible for singular input.
RMatrix matrix_inverse(const RMatrix& a);

// A super tau-cover: fields v^alpha, odd sigma_{alpha,k}, one-point functions
// f_{alpha,p}, the odd densities Phi, and the commuting flows along t^{beta,q}
// and tau_k. Subclasses supply the images of the base generators; the base
// class handles explicit time dependence and memoizes the derivations.
class TauCover {
public:
    virtual ~TauCover() = default;

    virtual int n() const = 0;
    virtual std::shared_ptr<const Algebra> algebra() const = 0;
    virtual const RMatrix& eta() const = 0;
    virtual const RMatrix& eta_inv() const = 0;
    virtual std::string name() const = 0;

    // f'_{alpha,p}
    virtual DiffPoly h(int alpha, int p) const = 0;
    // d f_{alpha,p} / d t^{beta,q}
    virtual DiffPoly omega(int alpha, int p, int beta, int q) const = 0;
    // d f_{alpha,p} / d tau_n
    virtual DiffPoly phi(int alpha, int p, int n) const = 0;
    // Resonant (alpha, p) for which Phi^n_{alpha,p} is a generator.
    virtual std::vector<std::pair<int, int>> resonant() const { return {}; }

    // Algebraic relations sigma_{alpha,k} = expression (1 <= k <= kmax) obtained by
    // integrating the bihamiltonian recursion with zero constant; the cover is
    // the quotient by them. reduce() substitutes them.
    virtual std::vector<std::pair<Gen, DiffPoly>> sigma_relations(int /*kmax*/) const { return {}; }
    virtual DiffPoly reduce(const DiffPoly& p) const { return p; }

    const Derivation& t_flow(int beta, int q) const;
    const Derivation& tau_flow(int k) const;

protected:
    // Images of the base generators (fields, sigma, f, Phi) along the flows.
    virtual DiffPoly t_image(int beta, int q, Gen g) const = 0;
    virtual DiffPoly tau_image(int k, Gen g) const = 0;

private:
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<Derivation>> t_flows_;
    mutable std::map<int, std::unique_ptr<Derivation>> tau_flows_;
};

struct CheckResult;
// [X, Y] = 0 on v^alpha, sigma_{alpha,k}, f_{alpha,p} and the resonant Phi, for
// all pairs among t^{beta,q} (q <= pmax) and tau_k (k <= kmax).
std::vector<CheckResult> check_commutativity(const TauCover& cover, int pmax, int kmax);
// D(sigma_{alpha,k} - expression) reduces to 0 for every relation with k <= kmax.
std::vector<CheckResult> check_relations_preserved(const TauCover& cover, const Derivation& d, int kmax);
// Replaces odd generators by sub(g) where it returns a value, keeping factor order.
DiffPoly substitute_odd(const DiffPoly& p, const std::function<const DiffPoly*(Gen)>& sub);
// t^{1,0} acts as dx on v^alpha, sigma_{alpha,k} and f_{alpha,k}, k <= kmax.
std::vector<CheckResult> check_principal_unit(const TauCover& cover, int kmax);

// Field generator v^alpha = u^{alpha,0}.
inline DiffPoly field(int alpha) { return DiffPoly::gen(Gen::jet(alpha, 0)); }
inline DiffPoly sigma_poly(int alpha, int k) { return DiffPoly::gen(Gen::sigma(alpha, k)); }

}  // namespace supertau
