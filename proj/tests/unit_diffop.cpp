#include "doctest.h"

#include "core/diffop.hpp"
#include "core/opseries.hpp"

using namespace eqtoda;

namespace {

const AlgebraContext kRed = ctx_reduced(6);
const AlgebraContext kDress = ctx_dressing_b(3, 6);

DiffPoly one(const AlgebraContext& c) { return DiffPoly::constant(c.kind, Rat(1)); }
DiffPoly gen(const AlgebraContext& c, const JetVar& j) { return DiffPoly::generator(c.kind, j); }

DiffOp make_K() {
    DiffOp k(kRed);
    k.set_coefficient(1, one(kRed));
    k.set_coefficient(0, gen(kRed, jet_v()));
    k.set_coefficient(-1, gen(kRed, jet_q()));
    return k;
}

DiffOp make_W() {
    DiffOp w(kDress);
    w.set_coefficient(0, one(kDress));
    for (int k = 1; k <= kDress.max_k; ++k)
        w.set_coefficient(-k, gen(kDress, jet_w(static_cast<uint8_t>(k))));
    w.clear_zero_below();
    return w;
}

}  // namespace

TEST_CASE("product twists coefficients symmetrically") {
    DiffOp lam = DiffOp::lambda_power(kDress, 1);
    DiffOp w1op = DiffOp::single(kDress, -1, gen(kDress, jet_w(1)));
    const int len = kDress.eps_order + 1;

    DiffPoly left = (lam * w1op).res();
    CHECK(DiffPoly::equal_to(left, ShiftSeries::e_shift(1, len).apply(gen(kDress, jet_w(1))),
                             kDress.eps_order));
    DiffPoly right = (w1op * lam).res();
    CHECK(DiffPoly::equal_to(right, ShiftSeries::e_shift(-1, len).apply(gen(kDress, jet_w(1))),
                             kDress.eps_order));
}

TEST_CASE("product is associative") {
    DiffOp k = make_K();
    CHECK(DiffOp::equal_on_overlap((k * k) * k, k * (k * k), kRed.eps_order));

    DiffOp w = make_W();
    DiffOp lam = DiffOp::lambda_power(kDress, 1);
    CHECK(DiffOp::equal_on_overlap((w * lam) * w, w * (lam * w), kDress.eps_order));
}

TEST_CASE("projections split an operator") {
    DiffOp k = make_K();
    DiffOp plus = k.proj_plus();
    CHECK(plus.window().lo == 0);
    CHECK(plus.window().hi == 1);
    CHECK(DiffPoly::equal_to(plus.res(), gen(kRed, jet_v()), 20));
    DiffOp minus = k.proj_minus();
    CHECK(DiffPoly::equal_to(minus.coefficient(-1), gen(kRed, jet_q()), 20));
    CHECK(DiffOp::equal_on_overlap(plus + minus, k, 20));
}

TEST_CASE("residue of a commutator is a total derivative") {
    DiffOp a = DiffOp::single(kRed, 1, gen(kRed, jet_v()));
    DiffOp b = DiffOp::single(kRed, -1, gen(kRed, jet_q()));
    DiffPoly r = (a * b - b * a).res();
    const int len = kRed.eps_order + 1;
    DiffPoly expect =
        ShiftSeries::nabla(len).apply(gen(kRed, jet_v()) * gen(kRed, jet_q())).mul_eps(1);
    CHECK(DiffPoly::equal_to(r, expect, kRed.eps_order));
}

TEST_CASE("squared K exhibits the bracket") {
    DiffOp k2 = make_K().power(2);
    const int len = kRed.eps_order + 1;
    DiffPoly expect = ShiftSeries::bracket(2, len).apply(gen(kRed, jet_v()));
    CHECK(DiffPoly::equal_to(k2.coefficient(1), expect, kRed.eps_order));
    CHECK(DiffPoly::equal_to(k2.coefficient(2), one(kRed), kRed.eps_order));
}

TEST_CASE("window bookkeeping for truncated series") {
    DiffOp w = make_W();
    CHECK(w.window().lo == -3);
    CHECK(w.window().hi == 0);
    CHECK_FALSE(w.window().zero_below);
    CHECK(w.window().zero_above);

    DiffOp ww = w * w;
    CHECK(ww.window().lo == -3);  // unknown tails first poison degree -4
    CHECK(ww.window().hi == 0);
    CHECK(DiffPoly::equal_to(ww.res(), one(kDress), 20));
    DiffPoly w1 = gen(kDress, jet_w(1));
    CHECK(DiffPoly::equal_to(ww.coefficient(-1), w1.scaled(Rat(2)), kDress.eps_order));

    CHECK_THROWS_AS(w.restricted(-2, -1).res(), Error);
    CHECK_THROWS_AS(w.restricted(-3, -3) + w.restricted(0, 0), Error);
}

TEST_CASE("inversion from the unit end") {
    DiffOp lam = DiffOp::lambda_power(kDress, 1);
    DiffOp li = lam.inverted(3);
    CHECK(DiffPoly::equal_to(li.coefficient(-1), one(kDress), 20));
    for (int k = 2; k <= 4; ++k)
        CHECK(li.coefficient(-k).is_zero_to(kDress.eps_order));

    DiffOp t(kDress);
    t.set_coefficient(0, one(kDress));
    t.set_coefficient(-1, gen(kDress, jet_w(1)));
    DiffOp x = t.inverted(3);
    const int len = kDress.eps_order + 1;
    DiffPoly w1 = gen(kDress, jet_w(1));
    CHECK(DiffPoly::equal_to(x.coefficient(-1), -w1, kDress.eps_order));
    DiffPoly nn = ShiftSeries::e_shift(1, len).apply(w1) * ShiftSeries::e_shift(-1, len).apply(w1);
    CHECK(DiffPoly::equal_to(x.coefficient(-2), nn, kDress.eps_order));
    CHECK(DiffOp::equal_on_overlap(t * x, DiffOp::identity(kDress), kDress.eps_order));
    CHECK(DiffOp::equal_on_overlap(x * t, DiffOp::identity(kDress), kDress.eps_order));

    // no unit leading coefficient anywhere
    DiffOp bad(kDress);
    bad.set_coefficient(0, w1);
    CHECK_THROWS_AS(bad.inverted(2), Error);
}

TEST_CASE("inversion from the lower end") {
    DiffOp w = make_W();
    DiffOp wb = w.bar();
    CHECK(wb.window().lo == 0);
    CHECK(wb.window().hi == 3);
    CHECK(wb.window().zero_below);
    CHECK_FALSE(wb.window().zero_above);
    DiffOp xi = wb.inverted(3);
    CHECK(DiffOp::equal_on_overlap(wb * xi, DiffOp::identity(kDress), kDress.eps_order));
    CHECK(DiffOp::equal_on_overlap(xi * wb, DiffOp::identity(kDress), kDress.eps_order));
}

TEST_CASE("bar is an anti-isomorphism") {
    DiffOp lam = DiffOp::lambda_power(kRed, 1);
    DiffOp lb = lam.bar();
    CHECK(DiffPoly::equal_to(lb.coefficient(-1), gen(kRed, jet_q()), 20));

    // anti-multiplicativity fixes the twist of the q powers
    CHECK(DiffOp::equal_on_overlap(lam.power(2).bar(), lb * lb, kRed.eps_order));
    CHECK(DiffOp::equal_on_overlap(lam.power(3).bar(), lb * lb * lb, kRed.eps_order));

    DiffOp qop = DiffOp::single(kRed, -1, gen(kRed, jet_q()));
    CHECK(DiffOp::equal_on_overlap(qop.bar(), lam, kRed.eps_order));

    DiffOp k = make_K();
    CHECK(DiffOp::equal_on_overlap(k.bar().bar(), k, kRed.eps_order));
    CHECK(DiffOp::equal_on_overlap((k * k).bar(), k.bar() * k.bar(), kRed.eps_order));
}

TEST_CASE("q bracket powers") {
    DiffPoly q1 = q_bracket_power(kRed, 1);
    CHECK(DiffPoly::equal_to(q1, gen(kRed, jet_q()), 20));
    DiffPoly qm = q_bracket_power(kRed, -1);
    CHECK(DiffPoly::equal_to(qm, DiffPoly::generator(kRed.kind, jet_q(), -1), 20));

    // q^{[2]} = (E^{1/2} q)(E^{-1/2} q): even in eps, leading terms
    // q^2 + eps^2 (q q2 - q1^2)/4
    DiffPoly q2 = q_bracket_power(kRed, 2);
    DiffPoly q = gen(kRed, jet_q());
    DiffPoly u1 = gen(kRed, jet_u(1));
    DiffPoly qd = q * u1;                        // q' in the reduced algebra
    DiffPoly qdd = qd.derive();
    DiffPoly expect = q * q + ((q * qdd - qd * qd).scaled(Rat(1, 4))).mul_eps(2);
    CHECK(DiffPoly::equal_to(q2.truncated(3), expect.truncated(3), 3));

    // and the defining identity against the operator product
    DiffOp lam = DiffOp::lambda_power(kRed, 1);
    DiffOp lb2 = lam.bar().power(2);
    CHECK(DiffPoly::equal_to(lb2.coefficient(-2), q2, kRed.eps_order));
}

TEST_CASE("formal exponent offsets") {
    DiffOp ls = DiffOp::lambda_power_s(kRed, 0);
    DiffOp k = make_K();
    DiffOp m = ls * k;
    CHECK(m.s_offset() == 1);
    DiffOp at2 = m.subs_s_int(2);
    DiffOp direct = DiffOp::lambda_power(kRed, 2) * k;
    CHECK(DiffOp::equal_on_overlap(at2, direct, kRed.eps_order));
    CHECK_THROWS_AS(ls * m, Error);
}

TEST_CASE("dressing conjugation of the shift") {
    DiffOp w = make_W();
    DiffOp l = w * DiffOp::lambda_power(kDress, 1) * w.inverted();
    CHECK(l.window().lo == 1 - kDress.max_k);
    CHECK(l.window().hi == 1);
    CHECK_FALSE(l.window().zero_below);
    CHECK(l.window().zero_above);
    CHECK(DiffPoly::equal_to(l.coefficient(1), one(kDress), 20));

    // res L = E^{1/2} w1* + E^{-1/2} w1 = -eps nabla w1
    const int len = kDress.eps_order + 1;
    DiffPoly expect = ShiftSeries::nabla(len).apply(gen(kDress, jet_w(1))).mul_eps(1);
    CHECK(DiffPoly::equal_to(l.res(), -expect, kDress.eps_order));

    DiffOp ln = l.power(3);
    CHECK(ln.window().lo == 3 - kDress.max_k);
    CHECK(ln.window().hi == 3);
}
