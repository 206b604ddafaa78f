#include <doctest.h>

#include "supertau/laurent.hpp"

using namespace supertau;

namespace {
DiffPoly u(int s = 0) { return DiffPoly::gen(Gen::jet(1, s)); }
}  // namespace

TEST_CASE("split into non-negative and negative parts") {
    LaurentJet s = laurent(1, {DiffPoly(1), DiffPoly(), DiffPoly(1)});
    LaurentJet p = s.plus(0), m = s.minus(0);
    CHECK(p[1] == DiffPoly(1));
    CHECK(p.coeffs().size() == 1);
    CHECK(m[-1] == DiffPoly(1));
    CHECK(m.coeffs().size() == 1);
    CHECK((p + m).coeffs() == s.coeffs());
}

TEST_CASE("half-shifted split keeps lambda^{k+1/2} with k >= 0") {
    // lambda^{1/2} + lambda^{-1/2}
    LaurentJet s = laurent(1, {DiffPoly(1), DiffPoly(1)}, true);
    CHECK(s.plus(0).coeffs().size() == 1);
    CHECK(s.plus(0)[1] == DiffPoly(1));
    CHECK(s.minus(0)[0] == DiffPoly(1));
}

TEST_CASE("geometric inverse") {
    LaurentJet s = laurent(0, {DiffPoly(1), -u(), DiffPoly(), DiffPoly(), DiffPoly()});
    LaurentJet inv = inverse(s);
    for (int k = 0; k <= 4; ++k) CHECK(inv[-k] == u().pow(k));
    LaurentJet one = s * inv;
    CHECK(one[0] == DiffPoly(1));
    for (int k = 1; k <= 4; ++k) CHECK(one[-k].is_zero());
    CHECK_THROWS_AS(one[-5], WindowError);
}

TEST_CASE("inverse rejects non-constant leading terms") {
    LaurentJet s = laurent(0, {u(), DiffPoly(1)});
    CHECK_THROWS_AS(inverse(s), NotInvertible);
}

TEST_CASE("half shifts add under multiplication") {
    // (lambda^{-1/2})^2 = lambda^{-1}
    LaurentJet h = laurent(0, {DiffPoly(1)}, true);
    LaurentJet sq = h * h;
    CHECK(sq.half()[0] == false);
    CHECK(sq[-1] == DiffPoly(1));
    LaurentJet inv = inverse(h);  // lambda^{1/2}
    CHECK((inv * h)[0] == DiffPoly(1));
}

TEST_CASE("bivariate geometric series times (mu - lambda)") {
    BiSeries g = bi_geometric(-6);
    BiSeries ml({false, false}, {BiSeries::kNegInf, BiSeries::kNegInf}, {1, 1});
    ml.set({0, 1}, DiffPoly(1));
    ml.set({1, 0}, DiffPoly(-1));
    BiSeries one = g * ml;
    CHECK(one(0, 0) == DiffPoly(1));
    for (int i = 1; i < 5; ++i) CHECK(one(i, -i).is_zero());
}
