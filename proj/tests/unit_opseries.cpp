#include "doctest.h"

#include "core/opseries.hpp"

using namespace eqtoda;

namespace {

const int kLen = 7;

DiffPoly vgen(int order = 0) { return DiffPoly::generator(CtxKind::Reduced, jet_v(order)); }
DiffPoly ugen(int order = 0) { return DiffPoly::generator(CtxKind::Reduced, jet_u(order)); }

}  // namespace

TEST_CASE("P series coefficients") {
    ShiftSeries p = ShiftSeries::p_series(kLen);
    CHECK(p.coeffs()[0] == Rat(1));
    CHECK(p.coeffs()[1] == Rat(0));
    CHECK(p.coeffs()[2] == Rat(-1, 24));
    CHECK(p.coeffs()[3] == Rat(0));
    CHECK(p.coeffs()[4] == Rat(7, 5760));
    CHECK(p.coeffs()[5] == Rat(0));
}

TEST_CASE("P inverts the nabla prefactor") {
    ShiftSeries both = ShiftSeries::p_series(kLen).compose(ShiftSeries::p_inv_series(kLen));
    CHECK(both.dx() == 0);
    CHECK(both.coeffs()[0] == Rat(1));
    for (int j = 1; j < kLen; ++j)
        CHECK(both.coeffs()[j] == Rat(0));
}

TEST_CASE("nabla expands through odd jets") {
    DiffPoly nv = ShiftSeries::nabla(kLen).apply(vgen());
    // nabla v = v1 + eps^2 v3/24 + eps^4 v5/1920
    DiffPoly expect = vgen(1) + vgen(3).scaled(Rat(1, 24)).mul_eps(2) +
                      vgen(5).scaled(Rat(1, 1920)).mul_eps(4) +
                      vgen(7).scaled(Rat(1, 322560)).mul_eps(6);
    CHECK(DiffPoly::equal_to(nv, expect, kLen - 1));
}

TEST_CASE("shift operators compose and cancel") {
    ShiftSeries id = ShiftSeries::e_shift(1, kLen).compose(ShiftSeries::e_shift(-1, kLen));
    CHECK(id.coeffs()[0] == Rat(1));
    for (int j = 1; j < kLen; ++j)
        CHECK(id.coeffs()[j] == Rat(0));

    DiffPoly ev = ShiftSeries::e_shift(2, kLen).apply(vgen());
    // E v = v + eps v1 + eps^2 v2/2 + ...
    CHECK(DiffPoly::equal_to(ev.t_part(0), ev, kLen));
    DiffPoly expect(CtxKind::Reduced);
    for (int j = 0; j < kLen; ++j)
        expect += vgen(j).scaled(Rat(1) / Rat::factorial(j)).mul_eps(j);
    CHECK(DiffPoly::equal_to(ev, expect, kLen));
}

TEST_CASE("bracket series") {
    DiffPoly b2 = ShiftSeries::bracket(2, kLen).apply(vgen());
    // [2] v = 2v + eps^2 v2/4 + eps^4 v4/192
    DiffPoly expect = vgen().scaled(Rat(2)) + vgen(2).scaled(Rat(1, 4)).mul_eps(2) +
                      vgen(4).scaled(Rat(1, 192)).mul_eps(4) +
                      vgen(6).scaled(Rat(1, 23040)).mul_eps(6);
    CHECK(DiffPoly::equal_to(b2, expect, kLen - 1));

    // [-k] = -[k], [0] has no inverse
    DiffPoly bm = ShiftSeries::bracket(-2, kLen).apply(vgen());
    CHECK(DiffPoly::equal_to(bm, -b2, kLen - 1));
    CHECK_THROWS_AS(ShiftSeries::bracket_inv(0, kLen), Error);

    ShiftSeries id = ShiftSeries::bracket_inv(3, kLen).compose(ShiftSeries::bracket(3, kLen));
    CHECK(id.coeffs()[0] == Rat(1));
    for (int j = 1; j < kLen; ++j)
        CHECK(id.coeffs()[j] == Rat(0));
}

TEST_CASE("formal shift matches integer shifts at integer s") {
    DiffPoly f = shift_formal(vgen(), 1, 2, kLen);  // E^{(1+2s)/2} v
    CHECK(DiffPoly::equal_to(f.subs_s(Rat(0)), ShiftSeries::e_shift(1, kLen).apply(vgen()), kLen));
    CHECK(DiffPoly::equal_to(f.subs_s(Rat(1)), ShiftSeries::e_shift(3, kLen).apply(vgen()), kLen));
    CHECK(DiffPoly::equal_to(f.subs_s(Rat(-2)), ShiftSeries::e_shift(-3, kLen).apply(vgen()), kLen));
    // s-degree of the eps^j part is at most j
    for (int j = 0; j < kLen; ++j)
        CHECK(f.s_max_at_eps(j) <= j);
}

TEST_CASE("derivative towers feed the tower form") {
    auto tower = derivative_tower(vgen(), kLen - 1);
    CHECK(tower.size() == kLen);
    CHECK(DiffPoly::equal_to(tower[3], vgen(3), 20));
    DiffPoly a = shift_formal(vgen(), -1, 1, kLen);
    DiffPoly b = shift_formal_tower(tower, -1, 1, kLen);
    CHECK(DiffPoly::equal_to(a, b, kLen));
}

TEST_CASE("reduced involution is an involution") {
    DiffPoly v = vgen();
    DiffPoly iv = reduced_involute(v, kLen);
    // v maps to v - t P u
    ParamKey tk;
    tk.t = 1;
    DiffPoly pu = ShiftSeries::p_series(kLen).apply(ugen());
    DiffPoly expect = v - pu.scaled(CoeffSeries::monomial(tk, Rat(1)));
    CHECK(DiffPoly::equal_to(iv, expect, kLen - 1));
    CHECK(DiffPoly::equal_to(reduced_involute(iv, kLen), v, kLen - 1));

    // u and q are fixed up to coefficient conjugation
    CHECK(DiffPoly::equal_to(reduced_involute(ugen(), kLen), ugen(), kLen - 1));
}
