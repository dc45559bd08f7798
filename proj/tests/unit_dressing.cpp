#include "doctest.h"

#include "core/dressing.hpp"

using namespace eqtoda;

namespace {

const AlgebraContext kCtx = ctx_dressing_b(4, 6);
const int kN = kCtx.eps_order;
const int kLen = kN + 1;

DiffPoly one() { return DiffPoly::constant(kCtx.kind, Rat(1)); }
DiffPoly wj(int k, uint8_t order = 0) {
    return DiffPoly::generator(kCtx.kind, jet_w(static_cast<uint8_t>(k), false, order));
}

}  // namespace

TEST_CASE("recursion inverts the dressing operator on both sides") {
    DiffOp W = dressing_w(kCtx);
    DiffOp Winv = dressing_w_inverse(kCtx);
    CHECK(Winv.window() == Window{-kCtx.max_k, 0, false, true});

    DiffOp id = DiffOp::identity(kCtx);
    CHECK(DiffOp::equal_on_overlap(W * Winv, id, kN));
    CHECK(DiffOp::equal_on_overlap(Winv * W, id, kN));
    CHECK(DiffOp::equal_on_overlap(Winv, W.inverted(), kN));
}

TEST_CASE("conjugating the shift gives the expected lower-triangular tail") {
    Dressing d = make_dressing(kCtx);
    const int D = kCtx.max_k;
    CHECK(d.L.window() == Window{1 - D, 1, false, true});
    CHECK(DiffPoly::equal_to(d.L.coefficient(1), one(), 20));

    // a_1 = -eps nabla w_1
    DiffPoly a1 = ShiftSeries::nabla(kLen).apply(wj(1)).mul_eps(1).scaled(Rat(-1));
    CHECK(DiffPoly::equal_to(d.L.res(), a1, kN));

    // a_2 = -eps nabla w_2 + w_1 (E - 1) w_1
    DiffPoly a2 = ShiftSeries::nabla(kLen).apply(wj(2)).mul_eps(1).scaled(Rat(-1)) +
                  wj(1) * (ShiftSeries::e_shift(2, kLen).apply(wj(1)) - wj(1));
    CHECK(DiffPoly::equal_to(d.L.coefficient(-1), a2, kN));

    // every coefficient below the leading term vanishes with eps
    for (int k = 1; k <= D; ++k)
        CHECK(d.L.coefficient(1 - k).val() >= 1);
}

TEST_CASE("conjugate operator matches the involution of the straight one") {
    Dressing d = make_dressing(kCtx);
    const int D = kCtx.max_k;
    CHECK(d.Wbar.window() == Window{0, D, true, false});
    CHECK(DiffOp::equal_on_overlap(d.Wbarinv * d.Wbar, DiffOp::identity(kCtx), kN));
    CHECK(d.Lbar.window() == Window{-1, D - 1, true, false});
    CHECK(DiffPoly::equal_to(d.Lbar.coefficient(-1),
                             DiffPoly::generator(kCtx.kind, jet_q()), kN));
    CHECK(DiffOp::equal_on_overlap(d.Lbar, d.L.bar(), kN));
}

TEST_CASE("log-difference operator satisfies the derivative identity") {
    Dressing d = make_dressing(kCtx);
    DiffOp ell = ell_direct(d);
    CHECK(ell.window().lo == -kCtx.max_k);
    CHECK(ell.window().hi <= 0);
    CHECK(ell.window().zero_above);
    if (ell.determined(0))
        CHECK(ell.res().is_zero());

    // ell at Lambda^{-1} is exactly eps * dw_1
    CHECK(DiffPoly::equal_to(ell.coefficient(-1), wj(1, 1).mul_eps(1), 20));

    // eps dL = [ell, L]
    DiffOp lhs = d.L.derive_coeffs().mul_eps(1);
    DiffOp rhs = ell * d.L - d.L * ell;
    CHECK(DiffOp::equal_on_overlap(lhs, rhs, kN));
}

TEST_CASE("abstract Lax coefficients embed into the dressing algebra") {
    Dressing d = make_dressing(kCtx);
    AlgebraContext actx = ctx_free_a(kCtx.max_k, kN);
    GenSubst subst = embedding_map(actx, d);

    DiffPoly a1 = DiffPoly::generator(actx.kind, jet_a(1));
    CHECK(DiffPoly::equal_to(subst.apply(a1), d.L.res(), kN));
    DiffPoly a1bar = DiffPoly::generator(actx.kind, jet_a(1, true));
    CHECK(DiffPoly::equal_to(subst.apply(a1bar), d.L.res().involute_swap(), kN));

    // the whole abstract operator maps onto the dressed one
    DiffOp Lfree = DiffOp::lambda_power(actx, 1);
    for (int k = 1; k <= actx.max_k; ++k)
        Lfree.set_coefficient(1 - k, DiffPoly::generator(actx.kind,
                                                         jet_a(static_cast<uint8_t>(k))));
    Lfree.clear_zero_below();
    CHECK(DiffOp::equal_on_overlap(Lfree.substituted(subst, kCtx), d.L, kN));
    CHECK(DiffOp::equal_on_overlap(Lfree.bar().substituted(subst, kCtx), d.Lbar, kN));
}

TEST_CASE("fractional power interpolates the integer powers") {
    Dressing d = make_dressing(kCtx);
    FracPower fp = frac_power(kCtx, 3);
    REQUIRE(fp.a.size() == 4);

    // a_k(0) = 0 for k >= 1 (the s = 0 power is the identity operator)
    for (int k = 1; k <= 3; ++k)
        CHECK(fp.a[k].subs_s(Rat(0)).is_zero_to(kN));

    // a_k(1) matches the conjugated-shift coefficient at Lambda^{1-k}
    for (int k = 1; k <= 3; ++k)
        CHECK(DiffPoly::equal_to(fp.a[k].subs_s(Rat(1)), d.L.coefficient(1 - k), kN));

    // integer specializations agree with genuine operator powers
    for (int n = 2; n <= 3; ++n) {
        DiffOp Ln = d.L.power(n);
        for (int k = 1; k <= 3; ++k) {
            if (!Ln.determined(n - k))
                continue;
            CHECK(DiffPoly::equal_to(fp.a[k].subs_s(Rat(n)), Ln.coefficient(n - k), kN));
        }
    }

    // s-degree at eps^i stays <= i+1
    for (int k = 1; k <= 3; ++k)
        for (int i = 0; i <= kN; ++i)
            CHECK(fp.a[k].s_max_at_eps(i) <= i + 1);
}

TEST_CASE("fractional power solves its flow in the exponent") {
    Dressing d = make_dressing(kCtx);
    DiffOp ell = ell_direct(d);
    FracPower fp = frac_power(kCtx, 3);

    for (const DiffPoly& r : frac_power_ode_residuals(fp, ell))
        CHECK(r.is_zero_to(kN));

    // d a_k / ds at s = 0 recovers -b_k
    for (int k = 1; k <= 3; ++k) {
        DiffPoly slope = fp.a[k].ds().subs_s(Rat(0));
        CHECK(DiffPoly::equal_to(slope, -ell.coefficient(-k), kN));
    }
}
