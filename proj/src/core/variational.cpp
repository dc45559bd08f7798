#include "core/variational.hpp"

#include <set>

namespace eqtoda {

namespace {

const GenKey kV{Gen::V, false, 0};
const GenKey kU{Gen::U, false, 0};

std::string gen_label(const GenKey& g) {
    std::string s;
    switch (g.gen) {
        case Gen::Q: s = "q"; break;
        case Gen::U: s = "u"; break;
        case Gen::V: s = "v"; break;
        case Gen::A: s = "a" + std::to_string(g.index); break;
        case Gen::W: s = "w" + std::to_string(g.index); break;
    }
    if (g.barred)
        s += "~";
    return s;
}

IdentityReport fail_msg(std::string note) {
    IdentityReport r;
    r.ok = false;
    r.note = std::move(note);
    return r;
}

IdentityReport fail_poly(std::string note, const DiffPoly& residual) {
    IdentityReport r = fail_msg(std::move(note));
    if (auto loc = residual.leading_entry()) {
        r.where.mono = loc->mono;
        r.where.key = loc->key;
        r.where.diff = loc->coeff;
    }
    return r;
}

IdentityReport fail_obstruction(const std::string& note, const Functional::Obstruction& o) {
    return fail_poly(note + " [" + o.invariant + "]", o.residual);
}

IdentityReport fail_form(const std::string& note, const OneForm::Mismatch& m) {
    IdentityReport r = fail_msg(note + " [d" + gen_label(m.key.first) + " column]");
    r.where.mono = m.loc.mono;
    r.where.key = m.loc.key;
    r.where.diff = m.loc.coeff;
    return r;
}

IdentityReport fail_op_form(const std::string& note, const OperatorForm::Mismatch& m) {
    IdentityReport r = fail_form(note, m.at);
    r.where.degree = m.degree;
    return r;
}

bool functional_equal(const Functional& a, const Functional& b, int n,
                      Functional::Obstruction* why = nullptr) {
    return Functional::equal_to(a, b, n, why);
}

Rat harmonic(int m) {
    Rat h;
    for (int j = 1; j <= m; ++j)
        h += Rat(1, j);
    return h;
}

/** ad(L)^k applied to an operator-valued form. */
OperatorForm ad_power(const DiffOp& l, OperatorForm x, int k) {
    for (int j = 0; j < k; ++j)
        x = ad_op(l, x);
    return x;
}

}  // namespace

Functional& Functional::operator+=(const Functional& o) {
    d_ += o.d_;
    return *this;
}

Functional& Functional::operator-=(const Functional& o) {
    d_ -= o.d_;
    return *this;
}

Functional Functional::involute(int len) const {
    if (kind() != CtxKind::Reduced)
        throw Error(Errc::NotDefined, "involution of a non-reduced functional");
    return Functional(reduced_involute(d_, len));
}

bool Functional::is_zero_to(int n, Obstruction* why) const {
    auto blame = [&](const char* invariant, DiffPoly residual) {
        if (why)
            *why = Obstruction{invariant, std::move(residual)};
        return false;
    };
    if (d_.order() < n)
        return blame("validity order", d_);

    std::set<GenKey> gens;
    bool reduced_q = false;
    for (const auto& [m, c] : d_.terms()) {
        for (const auto& [j, e] : m.factors) {
            GenKey g = gen_of(j);
            if (g.gen == Gen::Q && kind() == CtxKind::Reduced) {
                reduced_q = true;  // folds into the u-derivative via q = e^u
                continue;
            }
            gens.insert(g);
        }
    }
    if (reduced_q)
        gens.insert(kU);
    for (const GenKey& g : gens) {
        DiffPoly r = d_.var_derivative(g);
        if (!r.is_zero_to(n))
            return blame("variational derivative", std::move(r));
    }

    CoeffSeries jf = d_.jetfree_part();
    if (!jf.truncated(n).is_zero())
        return blame("jet-free part", DiffPoly::constant(kind(), jf));

    if (kind() != CtxKind::Reduced) {
        // No derivative reaches q_1 q^{-1}: d(c q^alpha) needs alpha = 0 there.
        Monomial w = Monomial{}.with(jet_q(1), 1).with(jet_q(0), -1);
        CoeffSeries c = d_.coefficient_of(w);
        if (!c.truncated(n).is_zero())
            return blame("winding part", DiffPoly::monomial(kind(), w, c));
    }
    return true;
}

bool Functional::equal_to(const Functional& a, const Functional& b, int n,
                          Obstruction* why) {
    return (a - b).is_zero_to(n, why);
}

Functional res_functional(const DiffOp& a) {
    if (a.s_offset() != 0)
        throw Error(Errc::NotDefined, "residue of an operator with a formal exponent");
    return Functional(a.res());
}

OneForm res_form(const OperatorForm& a) {
    return a.res().canonicalized();
}

std::pair<DiffPoly, DiffPoly> apply_j(const DiffPoly& grad_v, const DiffPoly& grad_u,
                                      int len) {
    ShiftSeries nab = ShiftSeries::nabla(len);
    DiffPoly top = grad_v.derive().scaled(t_series()) + nab.apply(grad_u);
    return {top, nab.apply(grad_v)};
}

HamiltonianRecord hamiltonian(const Lax& lax, int n, int len) {
    if (lax.ctx().kind != CtxKind::Reduced)
        throw Error(Errc::NotDefined, "hamiltonian tower needs the reduced pair");
    auto h_density = [&](int m) { return lax.p(0, m + 1).scaled(Rat(1, m + 1)); };

    HamiltonianRecord rec;
    rec.n = n;
    DiffPoly hd = h_density(n);
    DiffPoly capd = hd;
    if (n >= 1)
        capd -= h_density(n - 1).scaled(t_series());
    for (int k = 1; k <= n - 1; ++k)
        capd += h_density(n - k - 1).scaled(z_series(k));

    rec.h = Functional(hd);
    rec.cap = Functional(capd);
    rec.barcap = Functional(reduced_involute(capd, len));
    rec.d_cap = differential(capd).canonicalized();
    rec.delta_v = rec.d_cap.coefficient(kV, 0);
    rec.delta_u = rec.d_cap.coefficient(kU, 0);
    return rec;
}

IdentityReport lemma_p0_check(int n, int eps_order) {
    AlgebraContext ctx = ctx_free_a(n + 2, eps_order);
    Lax lax = make_free_lax(ctx);
    int len = eps_order + 1;

    DiffPoly lhs = lax.p(0, n + 1);
    DiffPoly rhs(ctx.kind);
    for (int k = 0; k <= n; ++k) {
        DiffPoly a = DiffPoly::generator(ctx.kind, jet_a(uint8_t(k + 1)));
        rhs += ShiftSeries::bracket(k + 1, len).apply(a * lax.p(k, n));
    }
    if (!DiffPoly::equal_to(lhs, rhs, eps_order))
        return fail_poly("residue ladder at n=" + std::to_string(n), lhs - rhs);
    if (!lhs.alpha().truncated(eps_order).is_zero())
        return fail_poly("residue ladder keeps a jet-free part",
                         DiffPoly::constant(ctx.kind, lhs.alpha()));

    // Trace corollary: the brackets integrate away to plain multiplicities.
    Functional hn = res_functional(lax.power(n + 1)).scaled(Rat(1, n + 1));
    Functional sum = Functional::zero(ctx.kind);
    for (int k = 0; k <= n; ++k) {
        DiffPoly a = DiffPoly::generator(ctx.kind, jet_a(uint8_t(k + 1)));
        sum += Functional((a * lax.p(k, n)).scaled(Rat(k + 1, n + 1)));
    }
    Functional::Obstruction why;
    if (!functional_equal(hn, sum, eps_order, &why))
        return fail_obstruction("trace corollary at n=" + std::to_string(n), why);
    return {};
}

IdentityReport dls_check(int n, int depth, int eps_order) {
    AlgebraContext ctx = ctx_free_a(depth, eps_order);
    Lax lax = make_free_lax(ctx);
    OperatorForm dl = differential_op(lax.l());

    OperatorForm rhs(ctx);
    for (int k = 0; k <= n - 1; ++k) {
        Rat c = Rat::binomial(Rat(n), k + 1);
        if (k % 2)
            c = -c;
        rhs += ad_power(lax.l(), lax.power(n - 1 - k) * dl, k).scaled(c);
    }
    OperatorForm lhs = differential_op(lax.power(n));
    OperatorForm::Mismatch mm;
    if (!OperatorForm::equal_on_overlap(lhs, rhs, eps_order, &mm))
        return fail_op_form("power differential at n=" + std::to_string(n), mm);
    return {};
}

IdentityReport dlog_check(int depth, int eps_order) {
    AlgebraContext ctx = ctx_free_a(depth, eps_order);
    Lax lax = make_free_lax(ctx);
    int terms = eps_order + depth;  // past this, every term dies in truncation

    // Scalar side: the falling-factorial binomial series C(s, k+1) vanishes
    // at s = 0 and has s-derivative (-1)^k/(k+1) there; these are what turn
    // the fractional-power differential into the logarithm series under d/ds.
    ParamKey s_key;
    s_key.s = 1;
    CoeffSeries s = CoeffSeries::monomial(s_key, Rat(1));
    std::vector<Rat> dcoeff;
    for (int k = 0; k <= terms; ++k) {
        CoeffSeries p(Rat(1));
        for (int j = 0; j <= k; ++j)
            p = p * (s - CoeffSeries(Rat(j)));
        p = p.scaled(Rat::factorial(k + 1).inverse());
        if (!p.subs_s(Rat(0)).is_zero())
            return fail_msg("binomial series nonzero at s=0, k=" + std::to_string(k));
        CoeffSeries d = p.ds().subs_s(Rat(0));
        const Rat* r = d.single_rational();
        Rat expect = Rat(k % 2 ? -1 : 1, k + 1);
        if (!r || !(*r == expect))
            return fail_msg("binomial series s-derivative at k=" + std::to_string(k));
        dcoeff.push_back(*r);
    }

    OperatorForm dl = differential_op(lax.l());
    DiffOp linv = lax.l().inverted(depth + terms + 2);
    DiffOp lpow = DiffOp::identity(ctx);
    OperatorForm printed(ctx), sderiv(ctx);
    for (int k = 0; k <= terms; ++k) {
        lpow = lpow * linv;  // L^{-(k+1)}
        OperatorForm x = ad_power(lax.l(), lpow * dl, k);
        printed += x.scaled(Rat(1, k + 1));
        sderiv += x.scaled(k % 2 ? -dcoeff[size_t(k)] : dcoeff[size_t(k)]);
    }

    OperatorForm::Mismatch mm;
    if (!OperatorForm::equal_on_overlap(sderiv, printed, eps_order, &mm))
        return fail_op_form("s-derivative does not match the log series", mm);

    OperatorForm target = differential_op(ell_recursive(lax, depth));
    OperatorForm rhs = -printed;
    if (!OperatorForm::equal_on_overlap(rhs, target, eps_order, &mm))
        return fail_op_form("log series does not match d(ell)", mm);

    // Leading coefficient instance: the Lambda^{-1} entry is d b_1 = -P dv.
    OneForm lead = rhs.coefficient(-1).canonicalized();
    OneForm db1 = differential(ell_b_upto(lax, 1)[1]).canonicalized();
    if (!OneForm::equal_to(lead, db1, eps_order)) {
        auto fm = OneForm::first_mismatch(lead, db1, eps_order);
        return fail_form("leading log coefficient", fm ? *fm : OneForm::Mismatch{});
    }
    return {};
}

IdentityReport dhn_check(const ConstraintSolution& sol, const Lax& lax, int n,
                         int n_assert) {
    int len = n_assert + 1;
    HamiltonianRecord rec = hamiltonian(lax, n, len);

    OperatorForm dl = differential_op(sol.l);
    OneForm dhn = res_form(lax.power(n) * dl);
    OneForm dh_target = differential(rec.h.density()).canonicalized();
    if (!OneForm::equal_to(dhn, dh_target, n_assert)) {
        auto fm = OneForm::first_mismatch(dhn, dh_target, n_assert);
        return fail_form("residue of L^n dL at n=" + std::to_string(n),
                         fm ? *fm : OneForm::Mismatch{});
    }

    OperatorForm dk = differential_op(big_k(sol.rctx));
    OneForm dcap = res_form(lax.power(n) * dk);
    if (!OneForm::equal_to(dcap, rec.d_cap, n_assert)) {
        auto fm = OneForm::first_mismatch(dcap, rec.d_cap, n_assert);
        return fail_form("residue of L^n dK at n=" + std::to_string(n),
                         fm ? *fm : OneForm::Mismatch{});
    }
    return {};
}

IdentityReport var_corollary_check(const Lax& lax, int n, int n_assert) {
    int len = n_assert + 1;
    HamiltonianRecord rec = hamiltonian(lax, n, len);
    DiffPoly q = DiffPoly::generator(CtxKind::Reduced, jet_q());
    DiffPoly p0 = lax.p(0, n);
    DiffPoly p1 = lax.p(1, n);

    if (!DiffPoly::equal_to(rec.delta_v, p0, n_assert))
        return fail_poly("dv gradient of H_" + std::to_string(n), rec.delta_v - p0);
    if (!DiffPoly::equal_to(rec.delta_u, q * p1, n_assert))
        return fail_poly("du gradient of H_" + std::to_string(n), rec.delta_u - q * p1);

    DiffPoly pbar0 = reduced_involute(p0, len);
    DiffPoly pbar1 = reduced_involute(p1, len);
    OneForm dbar = differential(rec.barcap.density()).canonicalized();
    DiffPoly bv = dbar.coefficient(kV, 0);
    DiffPoly bu = dbar.coefficient(kU, 0);
    DiffPoly bu_target =
        q * pbar1 - ShiftSeries::p_series(len).apply(pbar0).scaled(t_series());
    if (!DiffPoly::equal_to(bv, pbar0, n_assert))
        return fail_poly("dv gradient of Hbar_" + std::to_string(n), bv - pbar0);
    if (!DiffPoly::equal_to(bu, bu_target, n_assert))
        return fail_poly("du gradient of Hbar_" + std::to_string(n), bu - bu_target);
    return {};
}

IdentityReport hamiltonian_flow_check(const ConstraintSolution& sol, const Lax& lax,
                                      int n, bool barred, int n_assert) {
    int len = n_assert + 1;
    HamiltonianRecord rec = hamiltonian(lax, n, len);

    DiffPoly gv = rec.delta_v, gu = rec.delta_u;
    if (barred) {
        OneForm dbar = differential(rec.barcap.density()).canonicalized();
        gv = dbar.coefficient(kV, 0);
        gu = dbar.coefficient(kU, 0);
    }
    auto [jv, ju] = apply_j(gv, gu, len);

    Derivation flow = reduced_flow(sol, n, barred);
    std::string tag = (barred ? "conjugate flow " : "flow ") + std::to_string(n);
    if (!DiffPoly::equal_to(flow.image(kV), jv, n_assert))
        return fail_poly(tag + ": v component", flow.image(kV) - jv);
    if (!DiffPoly::equal_to(flow.image(kU), ju, n_assert))
        return fail_poly(tag + ": u component", flow.image(kU) - ju);
    return {};
}

IdentityReport conservation_check(const ConstraintSolution& sol, const Lax& lax,
                                  int m, int n, bool barred, int n_assert) {
    int len = n_assert + 1;
    HamiltonianRecord rec = hamiltonian(lax, n, len);
    Derivation flow = reduced_flow(sol, m, barred);
    Functional rate(flow.apply(rec.cap.density()));
    Functional::Obstruction why;
    if (!rate.is_zero_to(n_assert, &why))
        return fail_obstruction("H_" + std::to_string(n) + " drifts under flow " +
                                    std::to_string(m),
                                why);
    return {};
}

IdentityReport j_antisymmetry_check(const DiffPoly& av, const DiffPoly& au,
                                    const DiffPoly& bv, const DiffPoly& bu,
                                    int len, int n_assert) {
    auto [jbv, jbu] = apply_j(bv, bu, len);
    auto [jav, jau] = apply_j(av, au, len);
    Functional lhs(av * jbv + au * jbu);
    Functional rhs(bv * jav + bu * jau);
    Functional::Obstruction why;
    if (!functional_equal(lhs, -rhs, n_assert, &why))
        return fail_obstruction("pairing against J is not antisymmetric", why);
    return {};
}

IdentityReport descendant_limit_check(const ConstraintSolution& sol, const Lax& lax,
                                      int k, int n_assert) {
    int len = n_assert + 1;
    const AlgebraContext& rctx = sol.rctx;
    DiffOp kop = big_k(rctx);
    DiffOp ell0 = sol.ell.subs_z_zero().subs_t_zero();
    DiffPoly pu =
        ShiftSeries::p_series(len).apply(DiffPoly::generator(CtxKind::Reduced, jet_u()));

    // Operator expansions at z = 0: L = K - t ell_0 + O(t^2) and
    // Lbar = K + t(ell_0 - Pu) + O(t^2).
    DiffOp::Mismatch om;
    DiffOp l0 = sol.l.subs_z_zero();
    if (!DiffOp::equal_on_overlap(l0.t_part(0), kop, n_assert, &om))
        return {false, "L does not start at K", om};
    if (!DiffOp::equal_on_overlap(l0.t_part(1), -ell0, n_assert, &om))
        return {false, "t-linear part of L is not -ell_0", om};
    DiffOp lb0 = sol.lbar.subs_z_zero();
    if (!DiffOp::equal_on_overlap(lb0.t_part(0), kop, n_assert, &om))
        return {false, "Lbar does not start at K", om};
    // The t-linear part of Lbar lives in positive degrees: it is the bar
    // image of ell_0, not ell_0 itself; the two only agree inside residues.
    DiffOp ellbar0 = sol.ell.bar().subs_z_zero().subs_t_zero();
    DiffOp lb1_target = ellbar0 - DiffOp::single(rctx, 0, pu);
    if (!DiffOp::equal_on_overlap(lb0.t_part(1), lb1_target, n_assert, &om))
        return {false, "t-linear part of Lbar is not bar(ell_0) - Pu", om};

    HamiltonianRecord top = hamiltonian(lax, k + 1, len);
    HamiltonianRecord prev = hamiltonian(lax, k, len);

    // The division by t is regular only when the difference is O(t).
    Functional::Obstruction why;
    Functional diff_cap = (top.cap - top.barcap).subs_z_zero();
    if (!diff_cap.t_part(0).is_zero_to(n_assert, &why))
        throw Error(Errc::TPoleDetected, "H_{k+1} - Hbar_{k+1} is not O(t) at k=" +
                                             std::to_string(k) + " [" + why.invariant + "]");
    Functional lim_cap = diff_cap.t_part(1);

    Functional diff_h = (top.h - top.h.involute(len)).subs_z_zero();
    if (!diff_h.t_part(0).is_zero_to(n_assert, &why))
        throw Error(Errc::TPoleDetected, "h_{k+1} - hbar_{k+1} is not O(t) at k=" +
                                             std::to_string(k) + " [" + why.invariant + "]");
    Functional lim_h = diff_h.t_part(1);

    DiffOp kp = kop.power(k + 1);
    Functional res_k = res_functional(kp);
    DiffOp core = DiffOp::single(rctx, 0, pu) - ell0.scaled(Rat(2));
    Functional res_core = res_functional(kp * core);

    // Residues do not see the difference between ell_0 and its bar image,
    // which is what lets the limit identities below use ell_0 throughout.
    Functional::Obstruction bar_why;
    if (!functional_equal(res_functional(kp * ellbar0), res_functional(kp * ell0),
                          n_assert, &bar_why))
        return fail_obstruction("bar image of ell_0 escapes the residue at k=" +
                                    std::to_string(k),
                                bar_why);

    // Plain tower: the limit is exactly Res(K^{k+1}(Pu - 2 ell_0)).
    if (!functional_equal(lim_h, res_core, n_assert, &why))
        return fail_obstruction("plain-tower descendant limit at k=" + std::to_string(k),
                                why);

    // Combined tower: the same residue minus 2/(k+1) Res(K^{k+1}); the gap is
    // (h_k + hbar_k) at t = 0 and does not vanish.
    Functional gap = res_k.scaled(Rat(2, k + 1));
    if (!functional_equal(lim_cap, res_core - gap, n_assert, &why))
        return fail_obstruction("combined-tower descendant limit at k=" + std::to_string(k),
                                why);
    if (!functional_equal(res_core - lim_cap, gap, n_assert, &why))
        return fail_obstruction("descendant limit gap at k=" + std::to_string(k), why);
    if (functional_equal(lim_cap, res_core, n_assert))
        return fail_msg("descendant limit gap vanished unexpectedly at k=" +
                        std::to_string(k));

    // Flow-side Hamiltonian: (k+1)!^{-1} t^{-1}(H_{k+1} - Hbar_{k+1})
    // - k!^{-1} c_k (H_k + Hbar_k) in the limit, in closed residue form with
    // the harmonic constant advanced to c_{k+1}.
    Rat f1 = Rat::factorial(k + 1).inverse();
    Functional ham = lim_cap.scaled(f1);
    Functional tail = (prev.cap + prev.barcap).subs_z_zero().subs_t_zero();
    ham -= tail.scaled(harmonic(k) * Rat::factorial(k).inverse());
    auto closed_form = [&](const Rat& c) {
        DiffOp shifted = core - DiffOp::identity(rctx).scaled(c * Rat(2));
        return res_functional(kp * shifted).scaled(f1);
    };
    Functional closed = closed_form(harmonic(k + 1));
    if (!functional_equal(ham, closed, n_assert, &why))
        return fail_obstruction("descendant hamiltonian at k=" + std::to_string(k), why);

    // With the harmonic constant left at c_k the residue form overshoots by
    // exactly 2/((k+1) (k+1)!) Res(K^{k+1}).
    Functional at_ck = closed_form(harmonic(k));
    Functional overshoot = res_k.scaled(Rat(2, k + 1) * f1);
    if (!functional_equal(at_ck - ham, overshoot, n_assert, &why))
        return fail_obstruction("descendant hamiltonian gap at k=" + std::to_string(k),
                                why);
    return {};
}

}  // namespace eqtoda
