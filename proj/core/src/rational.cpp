#include "supertau/rational.hpp"

#include <functional>
#include <stdexcept>

namespace supertau {

namespace {

using i128 = __int128;

constexpr i128 kMax = static_cast<i128>(INT64_MAX);

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits(i128 v) { return v <= kMax && v >= -kMax; }

mpq_class small_to_mpq(int64_t n, int64_t d) {
    mpq_class q(mpz_class(static_cast<long>(n)), mpz_class(static_cast<long>(d)));
    q.canonicalize();
    return q;
}

bool mpz_fits_i64(const mpz_class& z) { return z.fits_slong_p() && sizeof(long) == 8; }

}  // namespace

Rational::Rational(int64_t n, int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    i128 nn = n, dd = d;
    if (dd < 0) {
        nn = -nn;
        dd = -dd;
    }
    i128 g = gcd128(nn, dd);
    if (g > 1) {
        nn /= g;
        dd /= g;
    }
    if (fits(nn) && fits(dd)) {
        n_ = static_cast<int64_t>(nn);
        d_ = static_cast<int64_t>(dd);
    } else {
        assign(small_to_mpq(n, d));
    }
}

Rational::Rational(const mpq_class& q) { assign(q); }

void Rational::assign(const mpq_class& q) {
    if (mpz_fits_i64(q.get_num()) && mpz_fits_i64(q.get_den())) {
        n_ = q.get_num().get_si();
        d_ = q.get_den().get_si();
        if (n_ != INT64_MIN && d_ != INT64_MIN) {
            big_.reset();
            return;
        }
    }
    big_ = std::make_unique<mpq_class>(q);
    n_ = 0;
    d_ = 1;
}

Rational Rational::parse(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return Rational(q);
}

mpq_class Rational::to_mpq() const { return big_ ? *big_ : small_to_mpq(n_, d_); }

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }

int Rational::sign() const {
    if (big_) return sgn(*big_);
    return (n_ > 0) - (n_ < 0);
}

Rational Rational::operator-() const {
    if (big_) return Rational(mpq_class(-*big_));
    Rational r;
    r.n_ = -n_;
    r.d_ = d_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (o.n_ == 0) return *this;
        if (n_ == 0) {
            n_ = o.n_;
            d_ = o.d_;
            return *this;
        }
        i128 nn, dd;
        if (d_ == o.d_) {
            nn = static_cast<i128>(n_) + o.n_;
            dd = d_;
        } else {
            nn = static_cast<i128>(n_) * o.d_ + static_cast<i128>(o.n_) * d_;
            dd = static_cast<i128>(d_) * o.d_;
        }
        if (nn == 0) {
            n_ = 0;
            d_ = 1;
            return *this;
        }
        i128 g = gcd128(nn, dd);
        if (g > 1) {
            nn /= g;
            dd /= g;
        }
        if (fits(nn) && fits(dd)) {
            n_ = static_cast<int64_t>(nn);
            d_ = static_cast<int64_t>(dd);
            return *this;
        }
    }
    assign(to_mpq() + o.to_mpq());
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (n_ == 0 || o.n_ == 0) {
            n_ = 0;
            d_ = 1;
            return *this;
        }
        i128 g1 = gcd128(n_, o.d_);
        i128 g2 = gcd128(o.n_, d_);
        i128 nn = (static_cast<i128>(n_) / g1) * (static_cast<i128>(o.n_) / g2);
        i128 dd = (static_cast<i128>(d_) / g2) * (static_cast<i128>(o.d_) / g1);
        if (fits(nn) && fits(dd)) {
            n_ = static_cast<int64_t>(nn);
            d_ = static_cast<int64_t>(dd);
            return *this;
        }
    }
    assign(to_mpq() * o.to_mpq());
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    if (!o.big_) {
        Rational inv;
        inv.n_ = o.n_ < 0 ? -o.d_ : o.d_;
        inv.d_ = o.n_ < 0 ? -o.n_ : o.n_;
        return *this *= inv;
    }
    assign(to_mpq() / o.to_mpq());
    return *this;
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    return a.to_mpq() == b.to_mpq();
}

bool operator<(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return static_cast<i128>(a.n_) * b.d_ < static_cast<i128>(b.n_) * a.d_;
    return a.to_mpq() < b.to_mpq();
}

std::string Rational::to_string() const {
    if (big_) return big_->get_str();
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
}

std::string Rational::num_str() const { return big_ ? big_->get_num().get_str() : std::to_string(n_); }
std::string Rational::den_str() const { return big_ ? big_->get_den().get_str() : std::to_string(d_); }

int64_t Rational::to_int64() const {
    if (big_ || d_ != 1) throw std::domain_error("rational is not a machine integer: " + to_string());
    return n_;
}

size_t Rational::hash() const {
    if (big_) return std::hash<std::string>{}(big_->get_str());
    return std::hash<int64_t>{}(n_) * 1000003u ^ std::hash<int64_t>{}(d_);
}

}  // namespace supertau
