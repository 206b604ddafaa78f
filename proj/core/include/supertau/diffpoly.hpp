#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "supertau/generator.hpp"
#include "supertau/rational.hpp"

namespace supertau {

// Even factor: generator key and power. Powers of ExpGen may be negative.
using EvenFactor = std::pair<uint64_t, int32_t>;

struct Monomial {
    boost::container::small_vector<EvenFactor, 4> even;  // sorted by key, no zero powers
    boost::container::small_vector<uint64_t, 4> odd;     // strictly increasing keys
    int32_t eps = 0;                                     // power of the dispersion parameter
    int32_t c0 = 0;                                      // power of the Virasoro constant

    bool is_constant() const { return even.empty() && odd.empty(); }
    int odd_degree() const { return static_cast<int>(odd.size()); }
    int32_t power_of(Gen g) const;

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.eps == b.eps && a.c0 == b.c0 && a.even == b.even && a.odd == b.odd;
    }
    friend bool operator<(const Monomial& a, const Monomial& b);
    size_t hash() const;
};

struct MonomialHash {
    size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Product of two monomials. Returns the sign (+1/-1) from reordering odd
// factors, or 0 when an odd generator repeats.
int monomial_mul(const Monomial& a, const Monomial& b, Monomial& out);

struct Term {
    Monomial mono;
    Rational coeff;
};

// Exact-coefficient graded polynomial over the generator alphabet.
// Terms are kept sorted by monomial with no zero coefficients.
class DiffPoly {
public:
    DiffPoly() = default;
    DiffPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
    DiffPoly(int64_t c) : DiffPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    static DiffPoly gen(Gen g, int32_t power = 1);
    static DiffPoly monomial(Monomial m, Rational c = Rational(1));
    static DiffPoly eps(int32_t power);
    static DiffPoly c0(int32_t power = 1);
    static DiffPoly from_terms(std::vector<Term> terms);  // sums duplicates
    // terms already sorted, distinct and nonzero
    static DiffPoly from_sorted(std::vector<Term> terms) {
        DiffPoly p;
        p.terms_ = std::move(terms);
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    bool is_constant() const;
    // constant term (coefficient of the empty monomial with eps^0 c0^0)
    Rational constant_term() const;

    DiffPoly operator-() const;
    DiffPoly& operator+=(const DiffPoly& o);
    DiffPoly& operator-=(const DiffPoly& o);
    DiffPoly& operator*=(const Rational& c);
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(DiffPoly a, const Rational& c) { return a *= c; }
    friend DiffPoly operator*(const Rational& c, DiffPoly a) { return a *= c; }
    friend DiffPoly operator*(DiffPoly a, int64_t c) { return a *= Rational(c); }
    friend DiffPoly operator*(int64_t c, DiffPoly a) { return a *= Rational(c); }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
    friend bool operator==(const DiffPoly& a, const DiffPoly& b);
    friend bool operator!=(const DiffPoly& a, const DiffPoly& b) { return !(a == b); }

    DiffPoly mul_monomial(const Monomial& m, const Rational& c) const;
    DiffPoly pow(int k) const;

    // Odd degrees present among the terms.
    std::vector<int> odd_degrees() const;
    // -1 when terms have mixed odd degree, 0 for the zero polynomial.
    int uniform_odd_degree() const;
    int max_eps() const;
    int min_eps() const;
    bool has_kind(Kind k) const;
    bool any_gen(const std::function<bool(Gen)>& pred) const;
    int max_jet_order() const;  // over even jets and sigma derivative orders, -1 if none

    // Keep only the terms with the given eps power, then drop eps.
    DiffPoly eps_coefficient(int32_t power) const;
    // Set eps = 0; throws if negative powers are present.
    DiffPoly eps_to_zero() const;
    DiffPoly c0_coefficient(int32_t power) const;
    DiffPoly substitute_c0(const Rational& value) const;
    // Coefficient of a power of an even generator (other factors kept).
    DiffPoly coefficient_of(Gen g, int32_t power) const;
    // Apply a term-wise filter.
    DiffPoly filter(const std::function<bool(const Monomial&)>& keep) const;

    std::string to_string() const;

private:
    void add_scaled(const DiffPoly& o, bool negate);
    std::vector<Term> terms_;
};

// Left partial derivative with respect to a generator. For odd generators
// the factor is moved to the front (with sign) and removed. ExpGen is not a
// valid target here; use partial_field for chain-rule derivatives in v.
DiffPoly partial(const DiffPoly& p, Gen g);

// d/dv^alpha including exponential factors exp(k v^alpha).
DiffPoly partial_field(const DiffPoly& p, int alpha);

// Remove the odd factor at position idx; returns the sign of moving it to the front.
int remove_odd_at(const Monomial& m, size_t idx, Monomial& out);
// Remove one power of the even factor at position idx.
void lower_even_at(const Monomial& m, size_t idx, Monomial& out);

std::string gen_name(Gen g);

// Hash-map accumulator for building large sums of products.
class PolyBuilder {
public:
    void add(const Monomial& m, const Rational& c);
    // add c * (p * m), with p on the left
    void add_product(const DiffPoly& p, const Monomial& m, const Rational& c);
    void add(const DiffPoly& p, const Rational& c = Rational(1));
    DiffPoly finish();

private:
    std::unordered_map<Monomial, Rational, MonomialHash> acc_;
};

}  // namespace supertau
