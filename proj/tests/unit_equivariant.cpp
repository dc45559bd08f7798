#include "doctest.h"

#include "core/equivariant.hpp"

using namespace eqtoda;

namespace {

const int kN = 6;
const int kLen = kN + 1;
const AlgebraContext kCtx = ctx_reduced(kN);

DiffPoly q() { return DiffPoly::generator(kCtx.kind, jet_q()); }
DiffPoly v() { return DiffPoly::generator(kCtx.kind, jet_v()); }
DiffPoly u() { return DiffPoly::generator(kCtx.kind, jet_u()); }
DiffPoly P(const DiffPoly& p) { return ShiftSeries::p_series(kLen).apply(p); }
DiffPoly nab(const DiffPoly& p) { return ShiftSeries::nabla(kLen).apply(p); }
DiffPoly br2(const DiffPoly& p) { return ShiftSeries::bracket(2, kLen).apply(p); }

CoeffSeries tz(int tpow, int zindex) {
    ParamKey k;
    k.t = static_cast<int16_t>(tpow);
    if (zindex > 0)
        k.z[zindex - 1] = 1;
    return CoeffSeries::monomial(k, Rat(1));
}

}  // namespace

TEST_CASE("constraint solution starts with the printed low coefficients") {
    ConstraintSolution sol = solve_constraint(3, kN);

    // a_2 = q + t P(v) + z_1
    DiffPoly a2 = q() + P(v()).scaled(t_series()) +
                  DiffPoly::constant(kCtx.kind, z_series(1));
    CHECK(DiffPoly::equal_to(sol.a[2], a2, kN));

    // a_3: t-part as printed; the t^2 coefficient is P^2 v (the constraint
    // forces it) and the constant t z_1 rides along with the z-normalization.
    DiffPoly printed = (P(br2(v() * v()).scaled(Rat(1, 4)) + q()) -
                        (v() * br2(P(v()))).scaled(Rat(1, 2)))
                           .scaled(t_series());
    printed += P(v()).scaled(CoeffSeries::monomial(ParamKey{0, 2, 0, {}, {}}, Rat(1)));
    printed -= v().scaled(z_series(1));
    printed += DiffPoly::constant(kCtx.kind, z_series(2, Rat(1, 2)));

    DiffPoly deviation = DiffPoly::constant(kCtx.kind, tz(1, 1));
    deviation += (P(P(v())) - P(v())).scaled(tz(2, 0));
    CHECK(DiffPoly::equal_to(sol.a[3], printed + deviation, kN));

    // the log-correction starts at -P v
    CHECK(DiffPoly::equal_to(sol.b[1], -P(v()), kN));
}

TEST_CASE("constraint solution collapses to the tridiagonal operator at t = z = 0") {
    ConstraintSolution sol = solve_constraint(4, 4);
    DiffOp flat = sol.l.subs_t_zero().subs_z_zero();
    CHECK(DiffOp::equal_on_overlap(flat, big_k(sol.rctx), 4));
    for (int k = 3; k <= 4; ++k)
        CHECK(sol.a[k].subs_t_zero().subs_z_zero().is_zero_to(4));
}

TEST_CASE("deepening the constraint solve preserves earlier coefficients") {
    ConstraintSolution s3 = solve_constraint(3, 4);
    ConstraintSolution s5 = solve_constraint(5, 4);
    for (int k = 2; k <= 3; ++k)
        CHECK(DiffPoly::equal_to(s3.a[k], s5.a[k], 4));
}

TEST_CASE("reduced algebra identities behind the constraint") {
    // q nabla(v - vbar) = t dq, the Lambda^{-1} shadow of the constraint
    DiffPoly vbar = reduced_involute(v(), kLen);
    CHECK(DiffPoly::equal_to(q() * nab(v() - vbar), q().derive().scaled(t_series()), kN));
    // the involution is involutive on a solved coefficient
    ConstraintSolution sol = solve_constraint(3, 4);
    DiffPoly twice = reduced_involute(reduced_involute(sol.a[3], 5), 5);
    CHECK(DiffPoly::equal_to(twice, sol.a[3], 4));
}

TEST_CASE("log-correction identity descends to the reduced operators") {
    ConstraintSolution sol = solve_constraint(4, 4);
    DiffOp lhs = sol.l.derive_coeffs().mul_eps(1);
    DiffOp rhs = sol.ell * sol.l - sol.l * sol.ell;
    CHECK(DiffOp::equal_on_overlap(lhs, rhs, 4));
}

TEST_CASE("scaling derivation sees the solved coefficients") {
    ConstraintSolution sol = solve_constraint(3, kN);
    Derivation e = e_derivation(sol.rctx);

    CHECK(DiffPoly::equal_to(e.apply(sol.a[2]),
                             DiffPoly::constant(kCtx.kind, t_series()), kN));
    // e(a_3) = -t v + t^2 - z_1
    DiffPoly ea3 = -v().scaled(t_series()) + DiffPoly::constant(kCtx.kind, tz(2, 0)) -
                   DiffPoly::constant(kCtx.kind, z_series(1));
    CHECK(DiffPoly::equal_to(e.apply(sol.a[3]), ea3, kN));
}

TEST_CASE("scaling derivation commutes with the solved operator") {
    ConstraintSolution sol = solve_constraint(4, 4);
    Derivation e = e_derivation(sol.rctx);
    DiffOp eL = e.apply(sol.l);
    CHECK(DiffOp::equal_on_overlap(sol.l * eL, eL * sol.l, 4));
    // e(ell) = -L^{-1} e(L) on the solution
    DiffOp rhs = sol.l.inverted(sol.k_max) * eL;
    CHECK(DiffOp::equal_on_overlap(e.apply(sol.ell), -rhs, 4));
}

TEST_CASE("constants, theorem, puncture and dressing-side checks pass") {
    ConstraintSolution sol = solve_constraint(4, 4);
    for (int k = 1; k <= 3; ++k) {
        IdentityReport r = z_constant_check(sol, k, 4);
        CHECK(r.ok);
        if (!r.ok)
            MESSAGE(r.note);
    }
    CHECK(theorem_main_check(sol, 4).ok);
    CHECK(puncture_check(sol, 4).ok);
    CHECK(equivariant_w_check(sol, 4, 4).ok);
}

TEST_CASE("reduced flows agree with the free flows through the reduction") {
    const int n_ord = 4;
    ConstraintSolution sol = solve_constraint(5, n_ord);
    AlgebraContext fctx = ctx_free_a(5, n_ord);
    Lax flax = make_free_lax(fctx);
    for (int n = 1; n <= 2; ++n) {
        for (bool barred : {false, true}) {
            Derivation dn = free_flow(flax, n, barred);
            Derivation rn = reduced_flow(sol, n, barred);
            for (int k = 1; k <= 3; ++k) {
                DiffPoly ak = DiffPoly::generator(fctx.kind, jet_a(static_cast<uint8_t>(k)));
                DiffPoly lhs = sol.rho.apply(dn.apply(ak));
                DiffPoly rhs = rn.apply(sol.a[k]);
                CHECK(DiffPoly::equal_to(lhs, rhs, n_ord));
            }
            DiffPoly qf = DiffPoly::generator(fctx.kind, jet_q());
            CHECK(DiffPoly::equal_to(sol.rho.apply(dn.apply(qf)),
                                     rn.apply(q()), n_ord));
        }
    }
}

TEST_CASE("fault injection surfaces as located residuals") {
    ConstraintSolution bad = solve_constraint(4, 4, true);
    IdentityReport tm = theorem_main_check(bad, 4);
    CHECK_FALSE(tm.ok);
    CHECK_FALSE(tm.note.empty());
    CHECK_FALSE(puncture_check(bad, 4).ok);
    CHECK_FALSE(z_constant_check(bad, 2, 4).ok);
    // the dressing-side identity does not involve the solved coefficients
    CHECK(equivariant_w_check(bad, 4, 4).ok);
}
