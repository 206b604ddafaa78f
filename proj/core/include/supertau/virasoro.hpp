#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "supertau/cover.hpp"
#include "supertau/report.hpp"

namespace supertau {

class FrobeniusCover;

// (alpha, p) labelling t^{alpha,p}.
using TimeIndex = std::pair<int, int>;

// L_m = a^{XY} d_X d_Y + b^Y_X t^X d_Y + c_{XY} t^X t^Y + constant
//       + sum_k (k + c0) tau_k d/dtau_{k+m},
// with a and c summed over ordered pairs. b is given row by row: for a lower
// index X, the list of (Y, b^Y_X).
struct VirasoroCoefficients {
    int m = 0;
    int n = 1;
    std::map<std::pair<TimeIndex, TimeIndex>, Rational> a;
    std::function<std::vector<std::pair<TimeIndex, Rational>>(TimeIndex)> b_row;
    std::map<std::pair<TimeIndex, TimeIndex>, Rational> c;
    Rational constant;
    // Powers of eps multiplying a and c in the operator (dispersive KdV: 2, -2).
    int a_eps = 0;
    int c_eps = 0;
    // Weight of tau_k d/dtau_{k+m} is k + odd_shift + odd_c0 * c0.
    Rational odd_shift;
    Rational odd_c0 = Rational(1);

    DiffPoly odd_weight(int k) const;

    Rational b(TimeIndex lower, TimeIndex upper) const;
};

// Weight of the odd part: Consistent uses k + (m+1) c0, Printed uses k + c0.
// They agree at m = 0; Printed breaks the relations involving m = -1 unless c0 = 0.
enum class OddWeight { Consistent, Printed };

// Tables for m in {-1, 0, 1}; c is solved from the Euler identity for
// p + q <= m + 4. Throws UnsupportedOrder otherwise or when R_{r,2} != 0.
VirasoroCoefficients general_coefficients(const FrobeniusCover& cover, int m, OddWeight w = OddWeight::Consistent);
// KdV closed forms for every m >= -1; dispersive scales a by eps^2 and c by eps^-2.
VirasoroCoefficients kdv_coefficients(int m, bool dispersive, OddWeight w = OddWeight::Consistent);

nlohmann::json coefficients_to_json(const VirasoroCoefficients& v, int level_max);

// E^{m+1} Omega_{X;Y} = 2 a Omega Omega + b Omega + b Omega + 2 c for levels <= pmax,
// with E^{m+1} the power in the Frobenius algebra.
std::vector<CheckResult> check_euler_identity(const FrobeniusCover& cover, const VirasoroCoefficients& v, int pmax);

// L_m applied to a polynomial in the times; c0 stays symbolic.
DiffPoly apply_virasoro_operator(const VirasoroCoefficients& v, const DiffPoly& f);

// [L_m, L_n] = (m - n) L_{m+n} on all monomials of degree <= 2 in t^{alpha,p}
// (p <= P) and tau_k (k <= K). table(m) must cover every order reached.
std::vector<CheckResult> check_virasoro_algebra(const std::function<VirasoroCoefficients(int)>& table,
                                                const std::vector<int>& ms, int n, int P, int K);

// The symmetry d/ds_m of a super tau-cover. Images are exact modulo the ideal
// generated by t^{alpha,p} with p > P and tau_k with k > K. genus is the
// factor of the second-derivative term (0 at genus zero, eps^2 for KdV).
class VirasoroFlow {
public:
    VirasoroFlow(const TauCover& cover, VirasoroCoefficients coeffs, int P, int K, DiffPoly genus = DiffPoly());

    int m() const { return coeffs_.m; }
    int P() const { return P_; }
    int K() const { return K_; }
    const VirasoroCoefficients& coefficients() const { return coeffs_; }
    const Derivation& derivation() const { return *d_; }
    // d f_{alpha,p} / ds_m
    DiffPoly f_image(int alpha, int p) const;

private:
    DiffPoly rule(Gen g) const;
    // Image of f_{alpha,p} without the tau terms.
    DiffPoly even_part(int alpha, int p) const;
    // d Phi^k_{alpha,p} / ds_m, including the term of tau_k when k > K.
    DiffPoly tau_part(int alpha, int p, int k) const;

    const TauCover& cover_;
    VirasoroCoefficients coeffs_;
    int P_, K_;
    DiffPoly genus_;
    std::unique_ptr<Derivation> d_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, DiffPoly> even_;
};

struct SymmetryBounds {
    int pmax = 2;  // f_{alpha,p} and t^{beta,q} with p, q <= pmax
    int kmax = 2;  // sigma_{alpha,k}, Phi^k and tau_k with k <= kmax
};

// [d/ds_m, d/dt] and [d/ds_m, d/dtau] vanish on the generators, and d/ds_m
// preserves the sigma relations.
std::vector<CheckResult> check_symmetry_flows(const TauCover& cover, const VirasoroFlow& flow, SymmetryBounds bounds);
// [d/ds_a, d/ds_b] = (b - a) d/ds_{a+b} on the generators.
std::vector<CheckResult> check_symmetry_bracket(const TauCover& cover, const std::map<int, const VirasoroFlow*>& flows,
                                                int a, int b, SymmetryBounds bounds);
// Both of the above for every m in ms and every pair.
std::vector<CheckResult> check_symmetry_commutation(const TauCover& cover,
                                                    const std::map<int, const VirasoroFlow*>& flows,
                                                    const std::vector<int>& ms, SymmetryBounds bounds);

// The two expressions A and B of the odd Virasoro symmetry agree for
// each lambda; m in {-1, 0, 1}.
std::vector<CheckResult> check_ab_identity(const FrobeniusCover& cover, const VirasoroCoefficients& v);

}  // namespace supertau
