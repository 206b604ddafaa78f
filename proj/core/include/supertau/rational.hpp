#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <gmpxx.h>

namespace supertau {

// Exact rational. Values that fit in int64 stay inline; anything larger
// is promoted to a GMP rational and demoted again when it shrinks.
class Rational {
public:
    Rational() = default;
    Rational(int64_t n) : n_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(int64_t n, int64_t d);
    explicit Rational(const mpq_class& q);

    Rational(const Rational& o) : n_(o.n_), d_(o.d_) {
        if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
    }
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o) {
        if (this != &o) {
            n_ = o.n_;
            d_ = o.d_;
            big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;

    static Rational parse(const std::string& s);

    bool is_zero() const { return !big_ && n_ == 0; }
    bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
    bool is_integer() const;
    int sign() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);

    mpq_class to_mpq() const;
    std::string to_string() const;
    // numerator and denominator as decimal strings
    std::string num_str() const;
    std::string den_str() const;
    // valid only when the value fits in int64 (checked)
    int64_t to_int64() const;
    size_t hash() const;

private:
    void assign(const mpq_class& q);
    int64_t n_ = 0;
    int64_t d_ = 1;
    std::unique_ptr<mpq_class> big_;
};

}  // namespace supertau
