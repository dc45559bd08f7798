#include "doctest.h"

#include "core/equivariant.hpp"
#include "core/oneform.hpp"

using namespace eqtoda;

namespace {

const int kN = 5;
const int kLen = kN + 1;
const AlgebraContext kCtx = ctx_reduced(kN);

DiffPoly q() { return DiffPoly::generator(kCtx.kind, jet_q()); }
DiffPoly v(uint8_t n = 0) { return DiffPoly::generator(kCtx.kind, jet_v(n)); }
DiffPoly u(uint8_t n = 0) { return DiffPoly::generator(kCtx.kind, jet_u(n)); }

GenKey gq() { return GenKey{Gen::Q, false, 0}; }
GenKey gv() { return GenKey{Gen::V, false, 0}; }
GenKey gu() { return GenKey{Gen::U, false, 0}; }

}  // namespace

TEST_CASE("canonical differential recovers the variational derivatives") {
    // density with jets of v, a q-Laurent factor and the u-chain all active
    DiffPoly p = v() * v(1) * u(1) + q() * u() + q().pow(-1) * v(2) + v() * v();
    OneForm dp = differential(p).canonicalized();

    CHECK(DiffPoly::equal_to(dp.coefficient(gv(), 0), p.var_derivative(gv()), kN));
    CHECK(DiffPoly::equal_to(dp.coefficient(gu(), 0), p.var_derivative(gu()), kN));
    // after folding dq into q du nothing is left against dq
    CHECK(dp.coefficient(gq(), 0).is_zero());

    AlgebraContext free = ctx_free_a(2, kN);
    DiffPoly pf = DiffPoly::generator(free.kind, jet_q(1)) *
                      DiffPoly::generator(free.kind, jet_a(1)) +
                  DiffPoly::generator(free.kind, jet_a(2, false, 1)).pow(2);
    OneForm dpf = differential(pf).canonicalized();
    for (GenKey g : {GenKey{Gen::Q, false, 0}, GenKey{Gen::A, false, 1}, GenKey{Gen::A, false, 2}})
        CHECK(DiffPoly::equal_to(dpf.coefficient(g, 0), pf.var_derivative(g), kN));
}

TEST_CASE("exterior differential commutes with the total derivative") {
    // the reduced rewrite dq = q u_1 makes this a real constraint
    DiffPoly p = q() * v() + u(1) * q().pow(-2) + v(1) * u();
    OneForm lhs = differential(p.derive());
    OneForm rhs = differential(p).derive();
    CHECK(OneForm::equal_to(lhs, rhs, kN));

    AlgebraContext free = ctx_free_a(1, kN);
    DiffPoly pf = DiffPoly::generator(free.kind, jet_q()) *
                  DiffPoly::generator(free.kind, jet_a(1, false, 1));
    CHECK(OneForm::equal_to(differential(pf.derive()), differential(pf).derive(), kN));
}

TEST_CASE("exterior differential commutes with the lattice shifts") {
    DiffPoly p = v() * u() + q() * v();
    for (int m : {-2, -1, 1, 2}) {
        OneForm lhs = differential(ShiftSeries::e_shift(m, kLen).apply(p));
        OneForm rhs = e_shift_form(differential(p), m, kLen);
        CHECK(OneForm::equal_to(lhs, rhs, kN));
    }
}

TEST_CASE("differential of an operator product obeys the Leibniz rule") {
    DiffOp k = big_k(kCtx);
    DiffOp c = DiffOp::single(kCtx, -2, q() * v(1)) + DiffOp::single(kCtx, 1, u());

    for (const auto& [a, b] : {std::pair{k, k}, std::pair{k, c}, std::pair{c, k}}) {
        OperatorForm lhs = differential_op(a * b);
        OperatorForm rhs = differential_op(a) * b + a * differential_op(b);
        CHECK(OperatorForm::equal_on_overlap(lhs, rhs, kN));
    }
}

TEST_CASE("operator-form products respect inverses and report mismatches") {
    DiffOp k = big_k(kCtx);
    DiffOp kinv = k.inverted(3);
    OperatorForm dk = differential_op(k);

    // K (K^{-1} dK) agrees with dK where both sides are determined
    OperatorForm back = k * (kinv * dk);
    CHECK(OperatorForm::equal_on_overlap(back, dk, kN - 1));

    // ad by the identity is exactly zero
    OperatorForm zero = ad_op(DiffOp::identity(kCtx), dk);
    CHECK(zero.is_zero_to(kN));

    OperatorForm wrong = dk;
    wrong.set_coefficient(0, dk.coefficient(0).scaled(Rat(2)));
    OperatorForm::Mismatch where;
    CHECK_FALSE(OperatorForm::equal_on_overlap(wrong, dk, kN, &where));
    CHECK(where.degree == 0);
    CHECK(where.at.key.first == gv());
    CHECK(where.at.loc.coeff == Rat(1));
}

TEST_CASE("integration by parts fixes the boundary bookkeeping") {
    // f d(v_2) canonicalizes to f'' dv
    DiffPoly f = v() * u();
    OneForm w(kCtx.kind);
    w.add_term(gv(), 2, f);
    OneForm canon = w.canonicalized();
    CHECK(DiffPoly::equal_to(canon.coefficient(gv(), 0), f.derive().derive(), kN));
    CHECK(canon.terms().size() == 1);

    // a canonicalized total derivative pairs to zero against every variation
    OneForm exact = differential(f * v(1)).derive().canonicalized();
    OneForm direct = differential((f * v(1)).derive()).canonicalized();
    CHECK(OneForm::equal_to(exact, direct, kN));
}
