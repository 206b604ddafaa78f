#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "supertau/cover.hpp"
#include "supertau/report.hpp"
#include "supertau/serialize.hpp"

namespace supertau {

// Vector of functions on M, 1-based (entry 0 unused).
using VectorField = std::vector<DiffPoly>;

// Frobenius manifold data. Functions on M are DiffPolys in the fields
// u^{alpha,0} = v^alpha and the exponentials exp(q v^alpha). All index
// arrays are 1-based.
struct FrobeniusSpec {
    std::string name;
    int n = 0;
    Rational d;
    std::vector<std::string> fields;
    DiffPoly potential;
    std::vector<Rational> euler_linear;
    std::vector<Rational> euler_constants;
    std::vector<Rational> mu;
    std::vector<RMatrix> R;  // R[r-1] = R_r, entry [xi][alpha] = (R_r)^xi_alpha
    std::map<std::pair<int, int>, DiffPoly> h_table;

    // Derived on load.
    RMatrix eta;
    RMatrix eta_inv;
    std::vector<std::vector<std::vector<DiffPoly>>> c;      // c[g][a][b] = c^g_{ab}
    std::vector<std::vector<std::vector<DiffPoly>>> c_up;   // c_up[a][b][g] = c^{ab}_g
    std::vector<std::vector<DiffPoly>> g;                   // g^{ab}
    std::vector<std::vector<std::vector<DiffPoly>>> gamma;  // gamma[a][b][g] = Gamma^{ab}_g
    VectorField euler;

    DiffPoly apply(const VectorField& x, const DiffPoly& f) const;
    DiffPoly apply_euler(const DiffPoly& f) const { return apply(euler, f); }
    VectorField product(const VectorField& x, const VectorField& y) const;
    // E^k in the Frobenius algebra; E^0 is the unit field.
    VectorField euler_power(int k) const;
    LatexStyle style() const;
};

// Parses the document and computes the derived tensors. Throws ValidationError
// for malformed input or a non-constant or singular first metric.
FrobeniusSpec parse_spec(const nlohmann::json& doc);
// The identities every spec must satisfy, one result per identity and index.
std::vector<CheckResult> validate_spec(const FrobeniusSpec& spec);
// parse_spec followed by validate_spec; throws ValidationError naming the
// first violated identity.
FrobeniusSpec load_spec(const nlohmann::json& doc);
FrobeniusSpec load_spec_file(const std::string& path);
nlohmann::json spec_to_json(const FrobeniusSpec& spec);

// Built-in manifolds: "onedim" (F = v^3/6) and "cp1" (F = v^2 u/2 + e^u).
nlohmann::json builtin_spec_json(const std::string& name);
std::vector<std::string> builtin_spec_names();

// Antiderivative in v^alpha of a function on M (other fields are constants).
DiffPoly integrate_field(const DiffPoly& f, int alpha);
// G with dG/dv^alpha = w[alpha] and no constant term; SolveError if w is not closed.
DiffPoly potential_of(const VectorField& w, int n);

// Pairs (alpha, p), 1 <= p <= pmax, with 1 - 2p - 2 mu_alpha = 0.
std::vector<std::pair<int, int>> detect_resonance(const FrobeniusSpec& spec, int pmax);

// The super tau-cover of the principal hierarchy.
class FrobeniusCover : public TauCover {
public:
    explicit FrobeniusCover(std::shared_ptr<const FrobeniusSpec> spec, int resonance_pmax = 16);

    int n() const override { return spec_->n; }
    std::shared_ptr<const Algebra> algebra() const override { return alg_; }
    const RMatrix& eta() const override { return spec_->eta; }
    const RMatrix& eta_inv() const override { return spec_->eta_inv; }
    std::string name() const override { return spec_->name; }
    const FrobeniusSpec& spec() const { return *spec_; }

    DiffPoly h(int alpha, int p) const override;
    DiffPoly omega(int alpha, int p, int beta, int q) const override;
    DiffPoly phi(int alpha, int p, int n) const override;
    std::vector<std::pair<int, int>> resonant() const override { return resonant_; }
    std::vector<std::pair<Gen, DiffPoly>> sigma_relations(int kmax) const override;
    DiffPoly reduce(const DiffPoly& p) const override;
    // Delta^{k,n}_{alpha,p}, antisymmetric in (k, n).
    DiffPoly delta(int alpha, int p, int k, int n) const;

    // Constants of integration left free by the recursion and homogeneity,
    // as (alpha, p, beta) for the constant in d_beta h_{alpha,p}; set to zero.
    std::vector<std::tuple<int, int, int>> gauge() const;

    // Executable identities.
    std::vector<CheckResult> check_h(int pmax) const;
    std::vector<CheckResult> check_omega(int pmax) const;
    std::vector<CheckResult> check_tau_symmetry(int total) const;
    std::vector<CheckResult> check_phi(int pmax, int nmax) const;
    std::vector<CheckResult> check_delta(int pmax, int kmax) const;
    std::vector<CheckResult> check_principal_unit(int q) const;

protected:
    DiffPoly t_image(int beta, int q, Gen g) const override;
    DiffPoly tau_image(int k, Gen g) const override;

private:
    void extend_h(int p) const;
    DiffPoly n_pair(int alpha, int p, int beta, int q) const;
    DiffPoly sigma_rule(const Algebra& alg, int alpha, int k) const;

    std::shared_ptr<const FrobeniusSpec> spec_;
    std::shared_ptr<Algebra> alg_;
    std::vector<std::pair<int, int>> resonant_;
    // related_[alpha]: sigma_{alpha,k} = eta_{alpha beta} g^{beta gamma} sigma_{gamma,k-1}
    std::vector<bool> related_;

    mutable std::recursive_mutex mu_;
    mutable std::vector<std::vector<DiffPoly>> h_;  // h_[p][alpha]
    mutable std::vector<std::tuple<int, int, int>> gauge_;
    mutable std::map<std::tuple<int, int, int, int>, DiffPoly> omega_;
    mutable std::map<std::tuple<int, int, int>, DiffPoly> phi_;
    mutable std::map<std::pair<int, int>, DiffPoly> reduced_sigma_;
};

}  // namespace supertau
