#include "doctest.h"

#include "core/diffpoly.hpp"

using namespace eqtoda;

namespace {

DiffPoly gen(CtxKind kind, const JetVar& j, int e = 1) {
    return DiffPoly::generator(kind, j, e);
}

ParamKey eps_key(int e) {
    ParamKey k;
    k.eps = static_cast<int16_t>(e);
    return k;
}

}  // namespace

TEST_CASE("derivation raises jets by Leibniz") {
    const CtxKind kind = CtxKind::DressingB;
    DiffPoly p = gen(kind, jet_w(1)) * gen(kind, jet_w(2));
    DiffPoly d = p.derive();
    // (w1 w2)' = w1' w2 + w1 w2'
    DiffPoly expect = gen(kind, jet_w(1, false, 1)) * gen(kind, jet_w(2)) +
                      gen(kind, jet_w(1)) * gen(kind, jet_w(2, false, 1));
    CHECK(DiffPoly::equal_to(d, expect, 10));
}

TEST_CASE("reduced derivation rewrites dq to q u1") {
    const CtxKind kind = CtxKind::Reduced;
    DiffPoly q = gen(kind, jet_q());
    DiffPoly d = q.derive();
    DiffPoly expect = q * gen(kind, jet_u(1));
    CHECK(DiffPoly::equal_to(d, expect, 10));
    // and through negative powers: (q^-2)' = -2 q^-2 u1
    DiffPoly dm = gen(kind, jet_q(), -2).derive();
    DiffPoly em = gen(kind, jet_q(), -2) * gen(kind, jet_u(1)).scaled(Rat(-2));
    CHECK(DiffPoly::equal_to(dm, em, 10));
}

TEST_CASE("variational derivative kills total derivatives") {
    const CtxKind kind = CtxKind::Reduced;
    DiffPoly u = gen(kind, jet_u());
    // d/dx(u^2/2) = u u1 has vanishing u-gradient apart from the chain term
    DiffPoly f = u * gen(kind, jet_u(1));
    DiffPoly g = f.var_derivative(GenKey{Gen::U, false, 0});
    CHECK(g.is_zero_to(10));
}

TEST_CASE("reduced u-gradient sees q through the chain rule") {
    const CtxKind kind = CtxKind::Reduced;
    // u enters q as its logarithmic derivative: delta_u q = q
    DiffPoly q = gen(kind, jet_q());
    CHECK(DiffPoly::equal_to(q.var_derivative(GenKey{Gen::U, false, 0}), q, 10));
    // delta_u q^2: chain term gives 2 q^2
    DiffPoly q2 = gen(kind, jet_q(), 2);
    CHECK(DiffPoly::equal_to(q2.var_derivative(GenKey{Gen::U, false, 0}), q2.scaled(Rat(2)), 10));
}

TEST_CASE("classic one-jet variational derivative") {
    const CtxKind kind = CtxKind::Reduced;
    DiffPoly v = gen(kind, jet_v());
    DiffPoly v1 = gen(kind, jet_v(1));
    // delta_v (v v1^2) = v1^2 - d/dx(2 v v1) = -v1^2 - 2 v v2
    DiffPoly f = v * v1 * v1;
    DiffPoly expect = -(v1 * v1) - (v * gen(kind, jet_v(2))).scaled(Rat(2));
    CHECK(DiffPoly::equal_to(f.var_derivative(GenKey{Gen::V, false, 0}), expect, 10));
}

TEST_CASE("laurent inversion in the reduced algebra") {
    const CtxKind kind = CtxKind::Reduced;
    DiffPoly q = gen(kind, jet_q());
    DiffPoly u1 = gen(kind, jet_u(1));
    DiffPoly p = q - (q * u1).mul_eps(1).truncated(6);
    DiffPoly inv = p.laurent_invert();
    CHECK(DiffPoly::equal_to(p * inv, DiffPoly::constant(kind, Rat(1)), 6));

    // no invertible leading monomial: a sum of two jet monomials
    DiffPoly bad = q + u1;
    CHECK_THROWS_AS(bad.laurent_invert(), Error);
}

TEST_CASE("involution swaps barred families and negates t") {
    const CtxKind kind = CtxKind::FreeA;
    ParamKey tk;
    tk.t = 1;
    DiffPoly p = gen(kind, jet_a(1)).scaled(CoeffSeries::monomial(tk, Rat(1)));
    DiffPoly s = p.involute_swap();
    DiffPoly expect = gen(kind, jet_a(1, true)).scaled(CoeffSeries::monomial(tk, Rat(-1)));
    CHECK(DiffPoly::equal_to(s, expect, 10));
    CHECK(DiffPoly::equal_to(s.involute_swap(), p, 10));
}

TEST_CASE("alpha evaluates at the zero jet") {
    const CtxKind kind = CtxKind::FreeA;
    DiffPoly p = DiffPoly::constant(kind, Rat(3)) + gen(kind, jet_a(2)).mul_eps(1);
    CHECK(p.alpha().single_rational() != nullptr);
    CHECK(*p.alpha().single_rational() == Rat(3));
    CHECK_THROWS_AS(gen(kind, jet_q(), -1).alpha(), Error);
}

TEST_CASE("product validity follows the min rule") {
    const CtxKind kind = CtxKind::FreeA;
    DiffPoly a = gen(kind, jet_a(1)).truncated(3);    // valid below 3
    DiffPoly b = gen(kind, jet_a(2)).mul_eps(2);      // exact, val 2
    CHECK((a * b).order() == 5);
    CHECK((a * b).val() == 2);
    DiffPoly c = a * gen(kind, jet_a(3));
    CHECK(c.order() == 3);
}

TEST_CASE("generator substitution with prolongation") {
    // map v -> v^2 in Reduced and check the image of v1 is (v^2)' = 2 v v1
    GenSubst s(CtxKind::Reduced, CtxKind::Reduced);
    DiffPoly v = gen(CtxKind::Reduced, jet_v());
    s.set(GenKey{Gen::V, false, 0}, v * v);
    s.set(GenKey{Gen::U, false, 0}, gen(CtxKind::Reduced, jet_u()));
    s.set(GenKey{Gen::Q, false, 0}, gen(CtxKind::Reduced, jet_q()));
    DiffPoly img = s.apply(gen(CtxKind::Reduced, jet_v(1)));
    DiffPoly expect = (v * gen(CtxKind::Reduced, jet_v(1))).scaled(Rat(2));
    CHECK(DiffPoly::equal_to(img, expect, 10));
}

TEST_CASE("eps division demands regularity") {
    const CtxKind kind = CtxKind::FreeA;
    DiffPoly p = gen(kind, jet_a(1)).mul_eps(2);
    CHECK(DiffPoly::equal_to(p.div_eps_checked(2), gen(kind, jet_a(1)), 10));
    CHECK_THROWS_AS(gen(kind, jet_a(1)).div_eps_checked(1), Error);
}

TEST_CASE("leading entry reports the least eps term") {
    const CtxKind kind = CtxKind::FreeA;
    DiffPoly p = gen(kind, jet_a(2)).mul_eps(3) + gen(kind, jet_a(1)).mul_eps(1);
    auto loc = p.leading_entry();
    REQUIRE(loc.has_value());
    CHECK(loc->key == eps_key(1));
    CHECK(loc->coeff == Rat(1));
}
