#pragma once

// Independent single-field jet arithmetic for cross-checking the engine.
// A monomial is eps^{2g} times u^{(s_1)}...u^{(s_r)} with sorted orders.

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "supertau/diffpoly.hpp"

namespace oracle {

using supertau::DiffPoly;
using supertau::Gen;
using supertau::Rational;

using JetMono = std::pair<int, std::vector<int>>;
using JetPoly = std::map<JetMono, Rational>;

inline void add_to(JetPoly& p, const JetMono& m, const Rational& c) {
    auto& slot = p[m];
    slot += c;
    if (slot.is_zero()) p.erase(m);
}

inline JetPoly jet_u(int s = 0) { return JetPoly{{{0, {s}}, Rational(1)}}; }
inline JetPoly jet_const(const Rational& c, int g = 0) { return c.is_zero() ? JetPoly{} : JetPoly{{{g, {}}, c}}; }

inline JetPoly operator+(JetPoly a, const JetPoly& b) {
    for (const auto& [m, c] : b) add_to(a, m, c);
    return a;
}
inline JetPoly scale(const JetPoly& a, const Rational& k) {
    JetPoly r;
    for (const auto& [m, c] : a) add_to(r, m, c * k);
    return r;
}
inline JetPoly operator-(const JetPoly& a, const JetPoly& b) { return a + scale(b, Rational(-1)); }
inline JetPoly operator*(const JetPoly& a, const JetPoly& b) {
    JetPoly r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            std::vector<int> o = ma.second;
            o.insert(o.end(), mb.second.begin(), mb.second.end());
            std::sort(o.begin(), o.end());
            add_to(r, {ma.first + mb.first, o}, ca * cb);
        }
    return r;
}
inline JetPoly jet_dx(const JetPoly& a) {
    JetPoly r;
    for (const auto& [m, c] : a)
        for (size_t i = 0; i < m.second.size(); ++i) {
            std::vector<int> o = m.second;
            o[i] += 1;
            std::sort(o.begin(), o.end());
            add_to(r, {m.first, o}, c);
        }
    return r;
}
// u f' + u' f / 2 + eps^2 f''' / 8
inline JetPoly jet_p1(const JetPoly& f) {
    JetPoly d1 = jet_dx(f);
    JetPoly d3 = jet_dx(jet_dx(d1));
    JetPoly e3;
    for (const auto& [m, c] : d3) add_to(e3, {m.first + 1, m.second}, c / Rational(8));
    return jet_u() * d1 + scale(jet_u(1) * f, Rational(1, 2)) + e3;
}

inline DiffPoly to_diffpoly(const JetPoly& p) {
    DiffPoly r;
    for (const auto& [m, c] : p) {
        DiffPoly t = DiffPoly::eps(2 * m.first) * c;
        for (int s : m.second) t = t * DiffPoly::gen(Gen::jet(1, s));
        r += t;
    }
    return r;
}

// Multisets of `count` orders summing to `total`.
inline void partitions(int count, int total, int min_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (count == 0) {
        if (total == 0) out.push_back(cur);
        return;
    }
    for (int s = min_part; s * count <= total; ++s) {
        cur.push_back(s);
        partitions(count - 1, total - s, s, cur, out);
        cur.pop_back();
    }
}

// Gelfand-Dickey R_n by undetermined coefficients: the general homogeneous
// ansatz of weight n with (n - 1/2) dx(R_n) = P_1 R_{n-1} solved exactly.
inline std::vector<JetPoly> brute_force_R(int nmax) {
    std::vector<JetPoly> rs{jet_const(Rational(1))};
    for (int n = 1; n <= nmax; ++n) {
        std::vector<JetMono> basis;
        for (int g = 0; g < n; ++g) {
            std::vector<std::vector<int>> parts;
            std::vector<int> cur;
            partitions(n - g, 2 * g, 0, cur, parts);
            for (auto& p : parts) basis.push_back({g, p});
        }
        JetPoly target = jet_p1(rs.back());
        Rational w = Rational(2 * n - 1, 2);
        std::map<JetMono, std::vector<Rational>> rows;
        for (size_t j = 0; j < basis.size(); ++j)
            for (const auto& [m, c] : jet_dx(JetPoly{{basis[j], Rational(1)}})) {
                auto& row = rows[m];
                row.resize(basis.size());
                row[j] += w * c;
            }
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        for (auto& [m, row] : rows) {
            row.resize(basis.size());
            a.push_back(row);
            auto it = target.find(m);
            b.push_back(it == target.end() ? Rational(0) : it->second);
        }
        for (const auto& [m, c] : target)
            if (!rows.count(m)) return {};  // not in the image: no solution
        size_t cols = basis.size(), r = 0;
        std::vector<int> piv;
        for (size_t col = 0; col < cols && r < a.size(); ++col) {
            size_t p = r;
            while (p < a.size() && a[p][col].is_zero()) ++p;
            if (p == a.size()) continue;
            std::swap(a[p], a[r]);
            std::swap(b[p], b[r]);
            Rational inv = Rational(1) / a[r][col];
            for (auto& x : a[r]) x *= inv;
            b[r] *= inv;
            for (size_t o = 0; o < a.size(); ++o)
                if (o != r && !a[o][col].is_zero()) {
                    Rational f = a[o][col];
                    for (size_t k = 0; k < cols; ++k) a[o][k] -= f * a[r][k];
                    b[o] -= f * b[r];
                }
            piv.push_back(static_cast<int>(col));
            ++r;
        }
        for (size_t o = r; o < a.size(); ++o)
            if (!b[o].is_zero()) return {};
        JetPoly sol;
        for (size_t i = 0; i < piv.size(); ++i) add_to(sol, basis[piv[i]], b[i]);
        rs.push_back(sol);
    }
    return rs;
}

}  // namespace oracle
