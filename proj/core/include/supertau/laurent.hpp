#pragma once

#include <array>
#include <climits>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "supertau/diffpoly.hpp"
#include "supertau/errors.hpp"

namespace supertau {

// Truncated formal Laurent series in D spectral variables with DiffPoly
// coefficients. Exponents are stored as integers; a half-shifted variable
// carries an extra overall factor x^{-1/2}. For each variable the series is
// exact for exponents >= lo and vanishes above top. Products narrow lo
// according to the partner's top, so the window never claims unknown terms.
template <int D>
class Series {
public:
    using Exps = std::array<int, D>;
    static constexpr int kNegInf = INT_MIN / 4;

    Series() {
        lo_.fill(kNegInf);
        top_.fill(kNegInf);
        half_.fill(false);
    }
    Series(std::array<bool, D> half, Exps lo, Exps top) : lo_(lo), top_(top), half_(half) {}

    static Series constant(const DiffPoly& c) {
        Series s;
        s.top_.fill(0);
        s.set(Exps{}, c);
        return s;
    }

    const Exps& lo() const { return lo_; }
    const Exps& top() const { return top_; }
    const std::array<bool, D>& half() const { return half_; }
    const std::map<Exps, DiffPoly>& coeffs() const { return c_; }

    bool in_window(const Exps& e) const {
        for (int d = 0; d < D; ++d)
            if (e[d] < lo_[d]) return false;
        return true;
    }

    // Coefficient at stored exponents; throws outside the exact region.
    DiffPoly at(const Exps& e) const {
        if (!in_window(e)) throw WindowError("coefficient requested outside the truncation window");
        auto it = c_.find(e);
        return it == c_.end() ? DiffPoly() : it->second;
    }

    void set(const Exps& e, DiffPoly v) {
        for (int d = 0; d < D; ++d)
            if (e[d] > top_[d]) throw WindowError("coefficient above the declared top exponent");
        if (!in_window(e)) return;
        if (v.is_zero())
            c_.erase(e);
        else
            c_[e] = std::move(v);
    }

    DiffPoly operator[](int e) const
        requires(D == 1)
    {
        return at({e});
    }
    DiffPoly operator()(int el, int em) const
        requires(D == 2)
    {
        return at({el, em});
    }

    bool is_zero() const { return c_.empty(); }
    // The exact zero with no window, the identity for +=.
    bool is_null() const {
        if (!c_.empty()) return false;
        for (int d = 0; d < D; ++d)
            if (top_[d] != kNegInf || lo_[d] != kNegInf) return false;
        return true;
    }

    Series operator-() const {
        Series r = *this;
        for (auto& kv : r.c_) kv.second = -kv.second;
        return r;
    }

    Series& operator+=(const Series& o) {
        if (is_null()) return *this = o;
        if (o.is_null()) return *this;
        check_half(o);
        for (int d = 0; d < D; ++d) {
            lo_[d] = std::max(lo_[d], o.lo_[d]);
            top_[d] = std::max(top_[d], o.top_[d]);
        }
        for (const auto& kv : o.c_) c_[kv.first] += kv.second;
        prune();
        return *this;
    }
    Series& operator-=(const Series& o) { return *this += -o; }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }

    friend Series operator*(const Series& a, const Series& b) {
        Series r;
        Exps shift{};
        for (int d = 0; d < D; ++d) {
            bool both = a.half_[d] && b.half_[d];
            r.half_[d] = a.half_[d] != b.half_[d];
            shift[d] = both ? -1 : 0;
            r.lo_[d] = std::max(add(a.lo_[d], b.top_[d]), add(b.lo_[d], a.top_[d]));
            if (r.lo_[d] != kNegInf) r.lo_[d] += shift[d];
            r.top_[d] = add(a.top_[d], b.top_[d]);
            if (r.top_[d] != kNegInf) r.top_[d] += shift[d];
        }
        std::map<Exps, PolyBuilder> acc;
        for (const auto& x : a.c_)
            for (const auto& y : b.c_) {
                Exps e;
                for (int d = 0; d < D; ++d) e[d] = x.first[d] + y.first[d] + shift[d];
                if (!r.in_window(e)) continue;
                DiffPoly p = x.second * y.second;
                acc[e].add(p);
            }
        for (auto& kv : acc) {
            DiffPoly p = kv.second.finish();
            if (!p.is_zero()) r.c_.emplace(kv.first, std::move(p));
        }
        return r;
    }

    // Left multiplication of every coefficient by p.
    friend Series operator*(const DiffPoly& p, const Series& s) {
        Series r = s;
        for (auto& kv : r.c_) kv.second = p * kv.second;
        r.prune();
        return r;
    }
    friend Series operator*(const Series& s, const Rational& q) {
        Series r = s;
        for (auto& kv : r.c_) kv.second *= q;
        r.prune();
        return r;
    }

    // Multiply by var^k.
    Series shifted(int var, int k) const {
        Series r;
        r.half_ = half_;
        r.lo_ = lo_;
        r.top_ = top_;
        if (r.lo_[var] != kNegInf) r.lo_[var] += k;
        if (r.top_[var] != kNegInf) r.top_[var] += k;
        for (const auto& kv : c_) {
            Exps e = kv.first;
            e[var] += k;
            r.c_.emplace(e, kv.second);
        }
        return r;
    }

    // Coefficientwise map, e.g. dx or a flow.
    Series map(const std::function<DiffPoly(const DiffPoly&)>& f) const {
        Series r = *this;
        for (auto& kv : r.c_) kv.second = f(kv.second);
        r.prune();
        return r;
    }

    // Part with actual exponent >= 0 in var (plus) and the rest (minus).
    Series plus(int var) const {
        int thr = half_[var] ? 1 : 0;
        if (lo_[var] > thr) throw WindowError("non-negative part not determined by the window");
        Series r = *this;
        r.lo_[var] = kNegInf;
        for (auto it = r.c_.begin(); it != r.c_.end();) {
            if (it->first[var] < thr)
                it = r.c_.erase(it);
            else
                ++it;
        }
        return r;
    }
    Series minus(int var) const {
        int thr = half_[var] ? 1 : 0;
        Series r = *this;
        r.top_[var] = std::min(top_[var], thr - 1);
        for (auto it = r.c_.begin(); it != r.c_.end();) {
            if (it->first[var] >= thr)
                it = r.c_.erase(it);
            else
                ++it;
        }
        return r;
    }

    // Restrict the exact region to exponents >= lo (never widens).
    Series truncated(int var, int lo) const {
        Series r = *this;
        r.lo_[var] = std::max(r.lo_[var], lo);
        for (auto it = r.c_.begin(); it != r.c_.end();) {
            if (it->first[var] < r.lo_[var])
                it = r.c_.erase(it);
            else
                ++it;
        }
        return r;
    }

    std::string to_string() const {
        std::string s;
        for (const auto& kv : c_) {
            s += "[";
            for (int d = 0; d < D; ++d) s += (d ? "," : "") + std::to_string(kv.first[d]) + (half_[d] ? "-1/2" : "");
            s += "] " + kv.second.to_string() + "\n";
        }
        return s.empty() ? "0\n" : s;
    }

protected:
    static int add(int a, int b) { return (a == kNegInf || b == kNegInf) ? kNegInf : a + b; }
    void check_half(const Series& o) const {
        if (half_ != o.half_) throw WindowError("adding series with different half shifts");
    }
    void prune() {
        for (auto it = c_.begin(); it != c_.end();) {
            if (it->second.is_zero() || !in_window(it->first))
                it = c_.erase(it);
            else
                ++it;
        }
    }

    std::map<Exps, DiffPoly> c_;
    Exps lo_;
    Exps top_;
    std::array<bool, D> half_;
};

using LaurentJet = Series<1>;
// Series in (lambda, mu) = variables (0, 1).
using BiSeries = Series<2>;

// Series with the given coefficients at exponents top, top-1, ..., top-(n-1);
// exact down to top-(n-1).
LaurentJet laurent(int top, const std::vector<DiffPoly>& cs, bool half = false);

// Multiplicative inverse; the leading coefficient must be a nonzero constant.
LaurentJet inverse(const LaurentJet& s);

BiSeries bi_from_lambda(const LaurentJet& s);
BiSeries bi_from_mu(const LaurentJet& s);
// 1/(mu - lambda) = sum_{i>=0} lambda^i mu^{-i-1}, exact for mu exponents >= mu_lo.
BiSeries bi_geometric(int mu_lo);

}  // namespace supertau
