#include "supertau/laurent.hpp"

namespace supertau {

LaurentJet laurent(int top, const std::vector<DiffPoly>& cs, bool half) {
    LaurentJet r({half}, {top - static_cast<int>(cs.size()) + 1}, {top});
    for (size_t i = 0; i < cs.size(); ++i) r.set({top - static_cast<int>(i)}, cs[i]);
    return r;
}

LaurentJet inverse(const LaurentJet& s) {
    constexpr int kNegInf = LaurentJet::kNegInf;
    int t = s.top()[0];
    if (t == kNegInf || s.lo()[0] == kNegInf) throw NotInvertible("series without a finite window");
    DiffPoly lead = s.at({t});
    if (lead.is_zero() || !lead.is_constant() || lead.terms()[0].mono.eps != 0 || lead.terms()[0].mono.c0 != 0)
        throw NotInvertible("leading coefficient is not an invertible constant: " + lead.to_string());
    Rational inv_lead = Rational(1) / lead.constant_term();
    int depth = t - s.lo()[0];
    // x_j = -(1/a) sum_{i=1}^{j} s_{t-i} x_{j-i}
    std::vector<DiffPoly> x(static_cast<size_t>(depth) + 1);
    x[0] = DiffPoly(inv_lead);
    for (int j = 1; j <= depth; ++j) {
        PolyBuilder acc;
        for (int i = 1; i <= j; ++i) {
            auto it = s.coeffs().find({t - i});
            if (it == s.coeffs().end()) continue;
            acc.add(it->second * x[static_cast<size_t>(j - i)], -inv_lead);
        }
        x[static_cast<size_t>(j)] = acc.finish();
    }
    int new_top = s.half()[0] ? -t + 1 : -t;
    return laurent(new_top, x, s.half()[0]);
}

BiSeries bi_from_lambda(const LaurentJet& s) {
    BiSeries r({s.half()[0], false}, {s.lo()[0], BiSeries::kNegInf}, {s.top()[0], 0});
    for (const auto& kv : s.coeffs()) r.set({kv.first[0], 0}, kv.second);
    return r;
}

BiSeries bi_from_mu(const LaurentJet& s) {
    BiSeries r({false, s.half()[0]}, {BiSeries::kNegInf, s.lo()[0]}, {0, s.top()[0]});
    for (const auto& kv : s.coeffs()) r.set({0, kv.first[0]}, kv.second);
    return r;
}

BiSeries bi_geometric(int mu_lo) {
    int imax = -mu_lo - 1;
    BiSeries r({false, false}, {BiSeries::kNegInf, mu_lo}, {std::max(imax, 0), -1});
    for (int i = 0; i <= imax; ++i) r.set({i, -i - 1}, DiffPoly(1));
    return r;
}

}  // namespace supertau
