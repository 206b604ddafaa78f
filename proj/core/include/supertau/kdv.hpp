#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "supertau/cover.hpp"
#include "supertau/laurent.hpp"
#include "supertau/report.hpp"
#include "supertau/variational.hpp"

namespace supertau {

class FrobeniusCover;

// Gamma(a + 1/2) / Gamma(b + 1/2) for integers a, b.
Rational half_gamma_ratio(int a, int b);

// u and sigma_k in the single-field algebra.
inline DiffPoly kdv_u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }

// P_1 f = u f' + u' f / 2 + (eps^2/8) f'''.
DiffPoly kdv_p1(const Algebra& alg, const DiffPoly& f);

// P_0 = int theta theta'/2 and P_1 = int (u theta theta' + eps^2/8 theta theta''')/2.
std::pair<LocalFunctional, LocalFunctional> kdv_poisson_pair();
// [P_0,P_0] = [P_0,P_1] = [P_1,P_1] = 0.
std::vector<CheckResult> check_kdv_poisson_pair();

// The super tau-cover of the KdV hierarchy with dispersion parameter eps.
// Generating series use b^(lambda) = b(lambda)/sqrt(pi), whose coefficients
// (2n-1)!!/2^n R_n are rational.
class KdvCover : public TauCover {
public:
    KdvCover();

    int n() const override { return 1; }
    std::shared_ptr<const Algebra> algebra() const override { return alg_; }
    const RMatrix& eta() const override { return eta_; }
    const RMatrix& eta_inv() const override { return eta_; }
    std::string name() const override { return "kdv"; }

    // Gelfand-Dickey polynomials, R_0 = 1.
    DiffPoly R(int n) const;
    DiffPoly h(int alpha, int p) const override;
    DiffPoly omega(int alpha, int k, int beta, int n) const override;
    DiffPoly phi(int alpha, int k, int n) const override;

    // b^(lambda) with coefficients R_0..R_{terms-1}; half-shifted, stored
    // exponent -n for lambda^{-n-1/2}.
    LaurentJet b_hat(int terms) const;
    // c(lambda) = -sum sigma_n lambda^{-n-1}, n < terms.
    LaurentJet c_series(int terms) const;
    // B_n = (lambda^{n+1/2} b(lambda))_+ / Gamma(n+3/2).
    LaurentJet B(int n) const;
    // C_m = (lambda^m c(lambda))_-, exact to lambda^{-terms}.
    LaurentJet C(int m, int terms) const;
    // A with dx(A) = R_j sigma_m', from A_{0,m} = sigma_m and the skew-adjointness of P_1:
    // R_{j-1} P_1 sigma_m + sigma_m P_1 R_{j-1} = dx(u R sigma + eps^2/8 (R sigma'' - R' sigma' + R'' sigma)).
    DiffPoly antiderivative_R_dsigma(int j, int m) const;
    // The same antiderivatives read off the total-derivative form of b^(mu) c(lambda)'.
    std::map<std::pair<int, int>, DiffPoly> closed_form_antiderivatives(int jmax, int mmax) const;

    std::vector<CheckResult> check_recursion(int nmax) const;
    std::vector<CheckResult> check_generating_identities(int window) const;
    std::vector<CheckResult> check_zero_curvature(int nmax, int mmax, int window) const;
    std::vector<CheckResult> check_omega_phi(int kmax, int nmax) const;
    // eps -> 0 of every rule against the one-dimensional Frobenius cover.
    std::vector<CheckResult> check_dispersionless(const FrobeniusCover& onedim, int pmax, int kmax) const;
    // tau_0, tau_1 against the flows of P_0 = int theta theta'/2 and
    // P_1 = int (u theta theta' + eps^2/8 theta theta''')/2.
    std::vector<CheckResult> check_bihamiltonian_recovery(int smax) const;

protected:
    DiffPoly t_image(int beta, int q, Gen g) const override;
    DiffPoly tau_image(int k, Gen g) const override;

private:
    std::shared_ptr<Algebra> alg_;
    RMatrix eta_;

    mutable std::recursive_mutex mu_;
    mutable std::vector<DiffPoly> R_;
    mutable std::map<std::pair<int, int>, DiffPoly> omega_;
    mutable std::map<std::pair<int, int>, DiffPoly> phi_;
    mutable std::map<std::pair<int, int>, DiffPoly> anti_;
};

}  // namespace supertau
