#include "core/equivariant.hpp"

namespace eqtoda {

namespace {

void require_reduced(const AlgebraContext& ctx) {
    if (ctx.kind != CtxKind::Reduced)
        throw Error(Errc::Internal, "constraint machinery needs the reduced algebra");
}

DiffPoly gen_q(CtxKind kind) { return DiffPoly::generator(kind, jet_q()); }
DiffPoly gen_v(CtxKind kind) { return DiffPoly::generator(kind, jet_v()); }
DiffPoly gen_u(CtxKind kind) { return DiffPoly::generator(kind, jet_u()); }

DiffOp scaled_t(const DiffOp& op) { return op.scaled(t_series()); }

/** Fill an IdentityReport from a nonzero residual polynomial. */
IdentityReport fail_at(std::string note, int degree, const DiffPoly& residual) {
    IdentityReport r;
    r.ok = false;
    r.note = std::move(note);
    r.where.degree = degree;
    if (auto loc = residual.leading_entry()) {
        r.where.mono = loc->mono;
        r.where.key = loc->key;
        r.where.diff = loc->coeff;
    }
    return r;
}

bool poly_check(IdentityReport& out, std::string note, int degree, const DiffPoly& residual,
                int n_assert) {
    if (residual.is_zero_to(n_assert))
        return true;
    out = fail_at(std::move(note), degree, residual.truncated(n_assert + 1));
    return false;
}

bool op_check(IdentityReport& out, std::string note, const DiffOp& a, const DiffOp& b,
              int n_assert) {
    DiffOp::Mismatch where;
    if (DiffOp::equal_on_overlap(a, b, n_assert, &where))
        return true;
    out.ok = false;
    out.note = std::move(note);
    out.where = where;
    return false;
}

}  // namespace

CoeffSeries t_series(const Rat& c) {
    ParamKey k;
    k.t = 1;
    return CoeffSeries::monomial(k, c);
}

CoeffSeries z_series(int k, const Rat& c) {
    if (k < 1 || k > kMaxZ)
        throw Error(Errc::Internal, "z index out of range");
    ParamKey key;
    key.z[k - 1] = 1;
    return CoeffSeries::monomial(key, c);
}

DiffOp big_k(const AlgebraContext& rctx) {
    require_reduced(rctx);
    DiffOp K = DiffOp::zero(rctx);
    K.set_coefficient(1, DiffPoly::constant(rctx.kind, Rat(1)));
    K.set_coefficient(0, gen_v(rctx.kind));
    K.set_coefficient(-1, gen_q(rctx.kind));
    return K;
}

Derivation e_derivation(const AlgebraContext& rctx) {
    require_reduced(rctx);
    Derivation e(rctx);
    e.set_image(GenKey{Gen::V, false, 0}, DiffPoly::constant(rctx.kind, Rat(1)));
    e.set_image(GenKey{Gen::U, false, 0}, DiffPoly(rctx.kind));
    e.set_image(GenKey{Gen::Q, false, 0}, DiffPoly(rctx.kind));
    return e;
}

DiffPoly z_element(const Lax& lax, int k) {
    const int len = lax.ctx().eps_order + 1;
    DiffPoly out = lax.p(-1, k);
    out -= gen_q(lax.ctx().kind) * lax.p(1, k);
    out -= ShiftSeries::p_series(len).apply(lax.p(0, k)).scaled(t_series());
    return out;
}

ConstraintSolution solve_constraint(int k_max, int eps_order, bool fault) {
    if (k_max < 1 || k_max - 1 > kMaxZ)
        throw Error(Errc::ConfigError, "constraint depth must be between 1 and 9");
    AlgebraContext rctx = ctx_reduced(eps_order);
    const CtxKind kind = rctx.kind;
    const int len = eps_order + 1;

    std::vector<DiffPoly> a(k_max + 1, DiffPoly(kind));
    a[1] = gen_v(kind);

    auto partial_l = [&](int m) {
        DiffOp L = DiffOp::zero(rctx);
        L.set_coefficient(1, DiffPoly::constant(kind, Rat(1)));
        for (int j = 1; j <= m; ++j)
            L.set_coefficient(1 - j, a[j]);
        L.clear_zero_below();
        return L;
    };

    // Stage m reads the Lambda^{-m} coefficient of K = L + t ell - sum (z_k/k) L^{-k}:
    // everything there except a_{m+1} itself is already known.
    for (int m = 1; m < k_max; ++m) {
        DiffOp L = partial_l(m);
        Lax lax(L, L.bar());
        std::vector<DiffPoly> b = ell_b_upto(lax, m);
        DiffPoly next = -b[m].scaled(t_series());
        if (m == 1)
            next += gen_q(kind);
        DiffOp linv = L.inverted(m);
        DiffOp lpow = DiffOp::identity(rctx);
        for (int k = 1; k <= m; ++k) {
            lpow = lpow * linv;
            next += lpow.coefficient(-m).scaled(z_series(k, Rat(1, k)));
        }
        a[m + 1] = std::move(next);
    }
    if (fault && k_max >= 3)
        a[3] = -a[3];

    GenSubst rho(CtxKind::FreeA, kind);
    rho.set(GenKey{Gen::Q, false, 0}, gen_q(kind));
    for (int k = 1; k <= k_max; ++k) {
        rho.set(GenKey{Gen::A, false, static_cast<uint8_t>(k)}, a[k]);
        rho.set(GenKey{Gen::A, true, static_cast<uint8_t>(k)}, reduced_involute(a[k], len));
    }

    DiffOp l = partial_l(k_max);
    DiffOp lbar = l.bar();
    Lax lax(l, lbar);
    std::vector<DiffPoly> b = ell_b_upto(lax, k_max);
    DiffOp ell = ell_recursive(lax, k_max);
    return ConstraintSolution{rctx,         k_max,          std::move(a), std::move(rho),
                              std::move(l), std::move(lbar), std::move(ell), std::move(b)};
}

Derivation reduced_flow(const ConstraintSolution& sol, int n, bool barred) {
    const AlgebraContext& rctx = sol.rctx;
    const int len = rctx.eps_order + 1;
    Lax lax(sol.l, sol.lbar);
    DiffPoly p0 = lax.p(0, n);
    DiffPoly p1 = lax.p(1, n);
    if (barred) {
        p0 = reduced_involute(p0, len);
        p1 = reduced_involute(p1, len);
    }
    ShiftSeries nabla = ShiftSeries::nabla(len);
    DiffPoly q = gen_q(rctx.kind);
    DiffPoly dv = nabla.apply(q * p1);
    if (!barred)
        dv += p0.derive().scaled(t_series());
    DiffPoly du = nabla.apply(p0);

    Derivation d(rctx);
    d.set_image(GenKey{Gen::V, false, 0}, std::move(dv));
    d.set_image(GenKey{Gen::Q, false, 0}, q * nabla.apply(p0));
    d.set_image(GenKey{Gen::U, false, 0}, std::move(du));
    return d;
}

IdentityReport z_constant_check(const ConstraintSolution& sol, int k, int n_assert) {
    IdentityReport out;
    if (k < 1 || k >= sol.k_max) {
        out.ok = false;
        out.note = "z index needs k < depth";
        return out;
    }
    AlgebraContext fctx = ctx_free_a(k + 1, sol.rctx.eps_order);
    Lax flax = make_free_lax(fctx);
    DiffPoly zred = sol.rho.apply(z_element(flax, k));

    DiffPoly jets = zred - DiffPoly::constant(sol.rctx.kind, zred.jetfree_part());
    if (!poly_check(out, "reduction is not constant", 1 - k, jets, n_assert))
        return out;

    CoeffSeries c = zred.jetfree_part();
    ParamKey unit;
    unit.z[k - 1] = 1;
    for (const auto& [key, r] : c.terms()) {
        bool bad = key.s != 0;
        for (int j = 0; j < kMaxZ; ++j) {
            if (key.zb[j] != 0)
                bad = true;
            if (j >= k - 1 && key.z[j] != 0 && key != unit)
                bad = true;
        }
        if (key == unit && r != Rat(1))
            bad = true;
        if (bad) {
            out.ok = false;
            out.note = "constant has an unexpected parameter term";
            out.where.degree = 1 - k;
            out.where.key = key;
            out.where.diff = r;
            return out;
        }
    }
    if (c.terms().count(unit) == 0) {
        out.ok = false;
        out.note = "constant is missing the unit z term";
        out.where.degree = 1 - k;
        out.where.key = unit;
    }
    return out;
}

IdentityReport theorem_main_check(const ConstraintSolution& sol, int n_assert) {
    IdentityReport out;
    const AlgebraContext& rctx = sol.rctx;
    DiffOp K = big_k(rctx);

    // eps^{-1} [K, L] = t dL and its conjugate
    DiffOp comm = (K * sol.l - sol.l * K).div_eps_checked(1);
    if (!op_check(out, "commutator with L", comm, scaled_t(sol.l.derive_coeffs()), n_assert))
        return out;
    DiffOp commb = (K * sol.lbar - sol.lbar * K).div_eps_checked(1);
    if (!op_check(out, "commutator with the conjugate operator", commb,
                  scaled_t(sol.lbar.derive_coeffs()), n_assert))
        return out;

    // greedy peel of K - L - t ell: Lambda^{-k} must expose the constant -z_k/k
    DiffOp R = K;
    R -= sol.l;
    R -= scaled_t(sol.ell);
    for (int d = 1; d >= 0; --d)
        if (!poly_check(out, "difference has an upper coefficient", d, R.coefficient(d),
                        n_assert))
            return out;
    DiffOp linv = sol.l.inverted(sol.k_max);
    DiffOp lpow = DiffOp::identity(rctx);
    for (int k = 1; k < sol.k_max; ++k) {
        lpow = lpow * linv;
        DiffPoly y = R.coefficient(-k);
        DiffPoly expected = DiffPoly::constant(rctx.kind, z_series(k, Rat(-1, k)));
        if (!poly_check(out, "peeled scalar is not -z_k/k", -k, y - expected, n_assert))
            return out;
        R -= lpow.scaled(z_series(k, Rat(-1, k)));
    }

    // with every z sent to zero the difference vanishes altogether
    DiffOp Rz = K;
    Rz -= sol.l;
    Rz -= scaled_t(sol.ell);
    Rz = Rz.subs_z_zero();
    if (!Rz.is_zero_to(n_assert)) {
        DiffOp::Mismatch where;
        DiffOp::equal_on_overlap(Rz, DiffOp::zero(rctx), n_assert, &where);
        out.ok = false;
        out.note = "z = 0 specialization leaves a residue";
        out.where = where;
    }
    return out;
}

IdentityReport puncture_check(const ConstraintSolution& sol, int n_assert) {
    IdentityReport out;
    const AlgebraContext& rctx = sol.rctx;
    Derivation e = e_derivation(rctx);
    DiffOp eL = e.apply(sol.l);

    DiffOp factor = sol.l;
    factor -= DiffOp::identity(rctx).scaled(t_series());
    DiffOp linv = sol.l.inverted(sol.k_max);
    DiffOp lpow = DiffOp::identity(rctx);
    for (int k = 1; k < sol.k_max; ++k) {
        lpow = lpow * linv;
        factor += lpow.scaled(z_series(k));
    }
    op_check(out, "punctured product misses the operator", factor * eL, sol.l, n_assert);
    return out;
}

IdentityReport equivariant_w_check(const ConstraintSolution& sol, int depth, int n_assert) {
    IdentityReport out;
    AlgebraContext dctx = ctx_dressing_b(depth, sol.rctx.eps_order);
    Dressing d = make_dressing(dctx);
    Lax dlax(d.L, d.Lbar);
    DiffOp ell = ell_direct(d);
    DiffOp K = d.L.proj_plus();
    K += d.Lbar.proj_minus();

    DiffOp lhs = K;
    lhs -= d.L;
    lhs -= scaled_t(ell);
    lhs = lhs * d.W;
    Derivation f1 = dressing_flow(d, dlax, 1, false);
    Derivation fb1 = dressing_flow(d, dlax, 1, true);
    DiffOp rhs = f1.apply(d.W);
    rhs -= fb1.apply(d.W);
    rhs -= scaled_t(d.W.derive_coeffs());
    rhs = rhs.mul_eps(1);
    if (!op_check(out, "flow difference on the dressing operator", lhs, rhs, n_assert))
        return out;

    // reduced form: the first-flow difference minus t d kills every generator
    Derivation s1 = reduced_flow(sol, 1, false);
    Derivation sb1 = reduced_flow(sol, 1, true);
    const CtxKind kind = sol.rctx.kind;
    const DiffPoly gens[] = {gen_v(kind), gen_u(kind), gen_q(kind)};
    for (const DiffPoly& g : gens) {
        DiffPoly r = s1.apply(g) - sb1.apply(g) - g.derive().scaled(t_series());
        if (!poly_check(out, "reduced flow difference moves a generator", 0, r, n_assert))
            return out;
    }
    return out;
}

}  // namespace eqtoda
