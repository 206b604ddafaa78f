#pragma once

#include <memory>
#include <string>
#include <vector>

#include "supertau/algebra.hpp"
#include "supertau/diffpoly.hpp"

namespace supertau {

// Element of the quotient by total x-derivatives, represented by a density.
class LocalFunctional {
public:
    // Throws ValidationError when the density mixes odd degrees or leaves the
    // free subalgebra.
    LocalFunctional(int n, DiffPoly density, int degree);
    static LocalFunctional of(int n, DiffPoly density);  // degree read off the density

    int n() const { return n_; }
    int degree() const { return degree_; }
    const DiffPoly& density() const { return density_; }

private:
    int n_;
    DiffPoly density_;
    int degree_;
};

enum class Family { Even, Odd };

// sum_s (-dx)^s d/du^{alpha,s}, or the same with left derivatives in theta^s_alpha.
DiffPoly variational_derivative(const DiffPoly& density, Family fam, int alpha);
DiffPoly variational_derivative(const LocalFunctional& f, Family fam, int alpha);

struct TotalDerivativeResult {
    bool exact = false;
    DiffPoly witness;  // dx(witness) = p when exact
};
// p must lie in the free subalgebra with no generator-free term.
TotalDerivativeResult is_total_derivative(const DiffPoly& p, int n);

// Equality in the quotient: all variational derivatives of the difference vanish
// and the difference has no generator-free term.
bool functional_equal(const LocalFunctional& a, const LocalFunctional& b);
bool functional_is_zero(const DiffPoly& density, int n);

LocalFunctional schouten_bracket(const LocalFunctional& p, const LocalFunctional& q);

// Matrix differential operator: entries[a][b][s] multiplies dx^s.
struct DiffOperator {
    int n = 0;
    std::vector<std::vector<std::vector<DiffPoly>>> entries;

    explicit DiffOperator(int dim) : n(dim), entries(dim, std::vector<std::vector<DiffPoly>>(dim)) {}
    void add(int a, int b, int s, const DiffPoly& coeff);
};
std::vector<DiffPoly> apply_operator(const DiffOperator& op, const std::vector<DiffPoly>& w);

// The flow D_P of a local multivector: du^a = dP/dtheta_a, dtheta_a = (-1)^p dP/du^a.
Derivation dp_flow(const LocalFunctional& p, std::shared_ptr<const Algebra> alg = nullptr);

struct BracketCheck {
    std::string name;
    bool pass = false;
    DiffPoly residue;  // density of the bracket
};
std::vector<BracketCheck> check_poisson_pair(const LocalFunctional& p0, const LocalFunctional& p1);

}  // namespace supertau
